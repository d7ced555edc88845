//! Truncated fractional power series in `X_1^{1/m}, …, X_d^{1/m}` with exact
//! cyclotomic coefficients.
//!
//! A series carries a truncation bound `T` on the total degree `|u| = Σ u_i`:
//! every term with `|u| < T` is represented exactly and nothing is known about
//! terms with `|u| >= T`. A series without a bound is an exact polynomial.
//! Operations that read the series (vertices, leading forms, valuations)
//! refuse to answer when unknown terms could change the answer.

mod cyclotomic;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Signed;

pub use cyclotomic::{cyclotomic_polynomial, format_bigq, totient, CyclotomicNumber};

use crate::error::{Error, Result};
use crate::lattice::{format_rational, Cone, RationalVector};
use crate::newton::{polyhedron_from_support, IntegralPolyhedron};
use crate::Q;

/// Truncation bound; `None` means the series is exact.
pub type Truncation = Option<Q>;

fn min_trunc(a: Truncation, b: Truncation) -> Truncation {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn add_trunc(t: Truncation, q: Q) -> Truncation {
    t.map(|t| t + q)
}

/// Equality compares the variable count, the truncation and the terms; the
/// declared denominator is only a bound on exponent denominators.
#[derive(Clone)]
pub struct FractionalSeries {
    nvars: usize,
    denom: i64,
    trunc: Truncation,
    terms: BTreeMap<RationalVector, CyclotomicNumber>,
}

impl FractionalSeries {
    /// Builds a series, summing repeated exponents, dropping zero coefficients
    /// and dropping terms at or beyond the truncation bound.
    pub fn new(
        nvars: usize,
        denom: i64,
        trunc: Truncation,
        terms: impl IntoIterator<Item = (RationalVector, CyclotomicNumber)>,
    ) -> Result<Self> {
        if denom < 1 {
            return Err(Error::InvalidArgument(format!("series denominator {denom} must be positive")));
        }
        let mut map: BTreeMap<RationalVector, CyclotomicNumber> = BTreeMap::new();
        for (u, c) in terms {
            if u.rank() != nvars {
                return Err(Error::RankMismatch { expected: nvars, found: u.rank() });
            }
            if !u.is_nonnegative() {
                return Err(Error::InvalidArgument(format!("exponent {u} has a negative coordinate")));
            }
            if denom % u.denominator() != 0 {
                return Err(Error::InvalidArgument(format!("exponent {u} has denominator not dividing {denom}")));
            }
            let entry = map.entry(u).or_insert_with(CyclotomicNumber::zero);
            *entry = &*entry + &c;
        }
        map.retain(|u, c| !c.is_zero() && trunc.is_none_or(|t| u.total() < t));
        Ok(Self { nvars, denom, trunc, terms: map })
    }

    pub fn zero(nvars: usize) -> Self {
        Self { nvars, denom: 1, trunc: None, terms: BTreeMap::new() }
    }

    /// `c · X^u`, exact.
    pub fn monomial(u: RationalVector, c: CyclotomicNumber) -> Self {
        let nvars = u.rank();
        let denom = u.denominator();
        Self::new(nvars, denom, None, [(u, c)]).expect("valid monomial")
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(RationalVector::zero(nvars), CyclotomicNumber::one())
    }

    /// `X_i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        Self::monomial(RationalVector::unit(nvars, i), CyclotomicNumber::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn trunc(&self) -> Truncation {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn terms(&self) -> &BTreeMap<RationalVector, CyclotomicNumber> {
        &self.terms
    }

    pub fn support(&self) -> Vec<RationalVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, u: &RationalVector) -> Option<&CyclotomicNumber> {
        self.terms.get(u)
    }

    /// No stored terms. For a truncated series this does not mean the series is zero.
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exactly zero: exact with no terms.
    pub fn is_zero(&self) -> bool {
        self.is_exact() && self.terms.is_empty()
    }

    /// Lower bound on the total degree of every term, stored or unknown.
    pub fn order(&self) -> Truncation {
        let stored = self.terms.keys().map(RationalVector::total).min();
        match (stored, self.trunc) {
            (Some(s), t) => Some(t.map_or(s, |t| s.min(t))),
            (None, t) => t,
        }
    }

    /// Least common denominator of the stored exponents.
    pub fn exponent_denominator(&self) -> i64 {
        self.terms.keys().fold(1, |acc, u| acc.lcm(&u.denominator()))
    }

    /// Least common level of the stored coefficients.
    pub fn coefficient_level(&self) -> u64 {
        self.terms.values().fold(1, |acc, c| acc.lcm(&c.level()))
    }

    /// True when every stored coefficient is rational.
    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().all(CyclotomicNumber::is_rational)
    }

    /// Lowers the truncation bound to `min(T, t)`, discarding terms beyond it.
    pub fn truncated(&self, t: Q) -> Self {
        let trunc = min_trunc(self.trunc, Some(t));
        let terms = self.terms.iter().filter(|(u, _)| trunc.is_none_or(|t| u.total() < t));
        Self { nvars: self.nvars, denom: self.denom, trunc, terms: terms.map(|(u, c)| (u.clone(), c.clone())).collect() }
    }

    /// Same series with its truncation bound replaced by `t` (terms beyond are
    /// dropped; `None` declares the stored terms to be the whole series).
    pub fn with_truncation(&self, t: Truncation) -> Self {
        let mut s = self.clone();
        s.trunc = t;
        s.terms.retain(|u, _| t.is_none_or(|t| u.total() < t));
        s
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        let terms = self.terms.iter().map(|(u, x)| (u.clone(), x * c));
        Self::new(self.nvars, self.denom, self.trunc, terms).expect("valid")
    }

    /// `X^v · self`, with the truncation shifted by `|v|`.
    pub fn shift(&self, v: &RationalVector) -> Self {
        let denom = self.denom.lcm(&v.denominator());
        let terms = self.terms.iter().map(|(u, c)| (u + v, c.clone()));
        Self::new(self.nvars, denom, add_trunc(self.trunc, v.total()), terms).expect("valid")
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.nvars), |acc, _| series_mul(&acc, self))
    }

    /// The image under `X_i^{1/m} -> ω^{k_i} X_i^{1/m}` with `ω = exp(2πi/m)`,
    /// which multiplies the coefficient of `X^u` by `ω^{Σ k_i m u_i}`.
    pub fn galois_image(&self, k: &[i64]) -> Self {
        let m = self.denom;
        let terms = self.terms.iter().map(|(u, c)| {
            let e: i64 = u
                .coords()
                .iter()
                .zip(k)
                .map(|(ui, ki)| (ui * Q::from_integer(m)).to_integer() * ki)
                .sum();
            (u.clone(), c * &CyclotomicNumber::root_of_unity(m as u64, e))
        });
        Self::new(self.nvars, m, self.trunc, terms).expect("valid")
    }

    /// Terms whose exponents satisfy `keep`, as an exact polynomial with the
    /// same truncation.
    pub fn filter_terms(&self, keep: impl Fn(&RationalVector) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(u, _)| keep(u)).map(|(u, c)| (u.clone(), c.clone()));
        Self::new(self.nvars, self.denom, self.trunc, terms).expect("valid")
    }
}

impl PartialEq for FractionalSeries {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.trunc == other.trunc && self.terms == other.terms
    }
}

impl Eq for FractionalSeries {}

impl fmt::Display for FractionalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (u, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*X^{u}")?;
        }
        if let Some(t) = self.trunc {
            write!(f, " + O(|u| >= {})", format_rational(&t))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FractionalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_vars(a: &FractionalSeries, b: &FractionalSeries) {
    assert_eq!(a.nvars, b.nvars, "series in different numbers of variables");
}

/// Coefficientwise sum; the truncation is the smaller of the two bounds.
pub fn series_add(a: &FractionalSeries, b: &FractionalSeries) -> FractionalSeries {
    check_vars(a, b);
    let trunc = min_trunc(a.trunc, b.trunc);
    let terms = a.terms.iter().chain(b.terms.iter()).map(|(u, c)| (u.clone(), c.clone()));
    FractionalSeries::new(a.nvars, a.denom.lcm(&b.denom), trunc, terms).expect("valid")
}

pub fn series_neg(a: &FractionalSeries) -> FractionalSeries {
    FractionalSeries { terms: a.terms.iter().map(|(u, c)| (u.clone(), -c)).collect(), ..a.clone() }
}

pub fn series_sub(a: &FractionalSeries, b: &FractionalSeries) -> FractionalSeries {
    series_add(a, &series_neg(b))
}

/// Product. An unknown term of `a` has degree at least `T_a` and meets terms of
/// `b` of degree at least `ord(b)`, so the product is known below
/// `min(T_a + ord(b), T_b + ord(a))`.
pub fn series_mul(a: &FractionalSeries, b: &FractionalSeries) -> FractionalSeries {
    check_vars(a, b);
    let denom = a.denom.lcm(&b.denom);
    if a.is_zero() || b.is_zero() {
        return FractionalSeries { denom, ..FractionalSeries::zero(a.nvars) };
    }
    let bound_a = match (a.trunc, b.order()) {
        (Some(t), Some(o)) => Some(t + o),
        _ => None,
    };
    let bound_b = match (b.trunc, a.order()) {
        (Some(t), Some(o)) => Some(t + o),
        _ => None,
    };
    let trunc = min_trunc(bound_a, bound_b);
    let mut acc: BTreeMap<RationalVector, CyclotomicNumber> = BTreeMap::new();
    for (u, c) in &a.terms {
        for (v, e) in &b.terms {
            let w = u + v;
            if trunc.is_some_and(|t| w.total() >= t) {
                continue;
            }
            let entry = acc.entry(w).or_insert_with(CyclotomicNumber::zero);
            *entry = &*entry + &(c * e);
        }
    }
    FractionalSeries::new(a.nvars, denom, trunc, acc).expect("valid")
}

fn require_terms(phi: &FractionalSeries) -> Result<()> {
    if phi.terms.is_empty() {
        return Err(if phi.is_exact() {
            Error::ZeroSeries
        } else {
            Error::TruncationTooCoarse("no terms are known below the truncation bound".into())
        });
    }
    Ok(())
}

/// The Newton polyhedron of the support, with recession cone the orthant.
///
/// For a truncated series every unknown exponent lies in `{u >= 0, |u| >= T}`,
/// which is `conv(T e_i) + orthant`; the polyhedron of the stored support is
/// the true one exactly when it already contains every `T e_i`.
pub fn newton_polyhedron(phi: &FractionalSeries) -> Result<IntegralPolyhedron> {
    require_terms(phi)?;
    let p = polyhedron_from_support(&phi.support(), &Cone::orthant(phi.nvars))?;
    if let Some(t) = phi.trunc {
        for i in 0..phi.nvars {
            let corner = RationalVector::unit(phi.nvars, i).scale(t);
            if !p.contains(&corner) {
                return Err(Error::TruncationTooCoarse(format!(
                    "unknown terms beyond {} could add vertices",
                    format_rational(&t)
                )));
            }
        }
    }
    Ok(p)
}

/// Smallest value of `<eta, u>` over unknown terms, for positive `eta`.
fn unknown_weight_bound(phi: &FractionalSeries, eta: &RationalVector) -> Option<Q> {
    let min_eta = eta.coords().iter().min().copied()?;
    phi.trunc.map(|t| t * min_eta)
}

pub(crate) fn check_interior_weight(eta: &RationalVector, nvars: usize) -> Result<()> {
    if eta.rank() != nvars {
        return Err(Error::RankMismatch { expected: nvars, found: eta.rank() });
    }
    if !eta.is_positive() {
        return Err(Error::BoundaryWeight(eta.to_string()));
    }
    Ok(())
}

/// Minimum of `<eta, u>` over the support together with the minimizing terms,
/// after checking that no unknown term can reach that value.
pub(crate) fn minimal_weight(phi: &FractionalSeries, eta: &RationalVector) -> Result<Q> {
    check_interior_weight(eta, phi.nvars)?;
    require_terms(phi)?;
    let min = phi.terms.keys().map(|u| eta.dot(u)).min().expect("nonempty");
    if let Some(bound) = unknown_weight_bound(phi, eta) {
        if min >= bound {
            return Err(Error::TruncationTooCoarse(format!(
                "minimal weight {} is not below the weight bound {} of unknown terms",
                format_rational(&min),
                format_rational(&bound)
            )));
        }
    }
    Ok(min)
}

/// The sub-sum of `phi` over the face of its Newton polyhedron where `<eta, ·>`
/// is minimal. The result is an exact polynomial.
pub fn symbolic_restriction(phi: &FractionalSeries, eta: &RationalVector) -> Result<FractionalSeries> {
    let min = minimal_weight(phi, eta)?;
    let terms = phi.terms.iter().filter(|(u, _)| eta.dot(u) == min).map(|(u, c)| (u.clone(), c.clone()));
    FractionalSeries::new(phi.nvars, phi.denom, None, terms)
}

/// `Some(v)` when `phi = X^v · unit`: the support has a coordinatewise minimum
/// `v`. With a truncation bound, `v` must also lie below every unknown
/// exponent, i.e. `v <= T e_i` for every `i`.
pub fn monomial_times_unit(phi: &FractionalSeries) -> Result<Option<RationalVector>> {
    require_terms(phi)?;
    let d = phi.nvars;
    let mut lower = phi.terms.keys().next().expect("nonempty").clone();
    for u in phi.terms.keys() {
        lower = RationalVector::new(lower.coords().iter().zip(u.coords()).map(|(a, b)| *a.min(b)).collect());
    }
    if !phi.terms.contains_key(&lower) {
        // Two incomparable minimal exponents stay minimal whatever the unknown
        // terms are, since those have larger total degree.
        return Ok(None);
    }
    if let Some(t) = phi.trunc {
        let dominates = (0..d).all(|i| {
            lower.coords().iter().enumerate().all(|(j, x)| if j == i { *x <= t } else { !x.is_positive() })
        });
        if !dominates {
            return Err(Error::TruncationTooCoarse(format!(
                "exponent {lower} cannot be certified below unknown terms of degree >= {}",
                format_rational(&t)
            )));
        }
    }
    Ok(Some(lower))
}

/// All `m^d` images of `phi` under the roots-of-unity action, in lexicographic
/// order of the exponent tuples `(k_1, …, k_d)`, duplicates included.
pub fn conjugate_orbit(phi: &FractionalSeries) -> Vec<FractionalSeries> {
    let m = phi.denom;
    let d = phi.nvars;
    let mut out = Vec::with_capacity((m as usize).pow(d as u32));
    let mut k = vec![0i64; d];
    loop {
        out.push(phi.galois_image(&k));
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            k[i] += 1;
            if k[i] < m {
                break;
            }
            k[i] = 0;
        }
    }
}

/// The distinct images of `phi` under `X_i^{1/m} -> ω_i X_i^{1/m}`, in order of
/// first appearance in [`conjugate_orbit`] (so `phi` itself comes first).
pub fn conjugates(phi: &FractionalSeries) -> Vec<FractionalSeries> {
    let mut out: Vec<FractionalSeries> = Vec::new();
    for c in conjugate_orbit(phi) {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}
