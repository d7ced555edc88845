//! Quasi-ordinary polynomials and branches.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{lattice_index, RationalVector, Sublattice};
use crate::semigroup::AffineSemigroup;
use crate::series::{
    conjugates, monomial_times_unit, series_add, series_mul, series_neg, series_sub, CyclotomicNumber,
    FractionalSeries,
};
use crate::{BigQ, Q};

/// Largest branch-polynomial degree built by [`branch_polynomial`].
pub const MAX_BRANCH_DEGREE: usize = 16;

/// A monic polynomial `Y^n + a_{n-1} Y^{n-1} + … + a_0` over `C[[X]]` whose
/// coefficients have integer exponents and vanish at the origin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeierstrassPolynomial {
    nvars: usize,
    coefficients: Vec<FractionalSeries>,
}

impl WeierstrassPolynomial {
    /// `coefficients[k]` is the coefficient of `Y^k` for `k < degree`.
    pub fn new(nvars: usize, coefficients: Vec<FractionalSeries>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::NotWeierstrass("degree must be positive".into()));
        }
        for (k, a) in coefficients.iter().enumerate() {
            if a.nvars() != nvars {
                return Err(Error::RankMismatch { expected: nvars, found: a.nvars() });
            }
            if let Some(u) = a.terms().keys().find(|u| !u.is_integral()) {
                return Err(Error::NotWeierstrass(format!("coefficient of Y^{k} has fractional exponent {u}")));
            }
            if a.coefficient(&RationalVector::zero(nvars)).is_some() {
                return Err(Error::NotWeierstrass(format!("coefficient of Y^{k} does not vanish at the origin")));
            }
        }
        let coefficients = coefficients.into_iter().map(|a| normalize_denominator(&a, 1)).collect();
        Ok(Self { nvars, coefficients })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficients of `Y^0, …, Y^{n-1}`.
    pub fn coefficients(&self) -> &[FractionalSeries] {
        &self.coefficients
    }

    /// All coefficients from `Y^0` to the leading `1`.
    fn full_coefficients(&self) -> Vec<FractionalSeries> {
        let mut c = self.coefficients.clone();
        c.push(FractionalSeries::one(self.nvars));
        c
    }

    /// `f(y)` by Horner's rule.
    pub fn evaluate(&self, y: &FractionalSeries) -> FractionalSeries {
        self.full_coefficients().iter().rev().fold(FractionalSeries::zero(self.nvars), |acc, a| series_add(&series_mul(&acc, y), a))
    }
}

impl fmt::Display for WeierstrassPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y^{}", self.degree())?;
        for (k, a) in self.coefficients.iter().enumerate().rev() {
            if !a.has_no_terms() || !a.is_exact() {
                write!(f, " + ({a})*Y^{k}")?;
            }
        }
        Ok(())
    }
}

fn normalize_denominator(a: &FractionalSeries, denom: i64) -> FractionalSeries {
    let denom = denom.lcm(&a.exponent_denominator());
    FractionalSeries::new(a.nvars(), denom, a.trunc(), a.terms().iter().map(|(u, c)| (u.clone(), c.clone())))
        .expect("exponents are unchanged")
}

/// Determinant by Berkowitz's division-free algorithm.
///
/// The characteristic polynomial of each leading principal submatrix is the
/// product of a Toeplitz matrix built from `a_rr`, `R M^k C` with the previous
/// one, where `M` is the previous submatrix, `R` the new row and `C` the new
/// column.
fn berkowitz_det(a: &[Vec<FractionalSeries>], nvars: usize) -> FractionalSeries {
    let n = a.len();
    let one = FractionalSeries::one(nvars);
    let mut c: Vec<FractionalSeries> = vec![one.clone(), series_neg(&a[0][0])];
    for r in 1..n {
        // t = [1, -a_rr, -R C, -R M C, …, -R M^{r-1} C]
        let mut t = vec![one.clone(), series_neg(&a[r][r])];
        let mut v: Vec<FractionalSeries> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rv = (0..r).fold(FractionalSeries::zero(nvars), |acc, j| series_add(&acc, &series_mul(&a[r][j], &v[j])));
            t.push(series_neg(&rv));
            v = (0..r)
                .map(|i| (0..r).fold(FractionalSeries::zero(nvars), |acc, j| series_add(&acc, &series_mul(&a[i][j], &v[j]))))
                .collect();
        }
        let next: Vec<FractionalSeries> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r)).fold(FractionalSeries::zero(nvars), |acc, j| series_add(&acc, &series_mul(&t[i - j], &c[j])))
            })
            .collect();
        c = next;
    }
    if n.is_multiple_of(2) {
        c[n].clone()
    } else {
        series_neg(&c[n])
    }
}

/// Largest size for which [`minor_det`] is used instead of Berkowitz.
const MINOR_EXPANSION_LIMIT: usize = 16;

/// Determinant by Laplace expansion along rows, sharing the minors on the
/// first `r` rows between all expansions (`n 2^n` products, zero entries
/// skipped). Unlike Berkowitz, every intermediate value is a genuine minor, so
/// sparse polynomial entries do not swell.
fn minor_det(a: &[Vec<FractionalSeries>], nvars: usize) -> FractionalSeries {
    let n = a.len();
    let mut minors: HashMap<u32, FractionalSeries> = HashMap::from([(0, FractionalSeries::one(nvars))]);
    for row in a {
        let mut next: HashMap<u32, FractionalSeries> = HashMap::new();
        for (&used, m) in &minors {
            for (j, entry) in row.iter().enumerate() {
                if used & (1 << j) != 0 || (entry.has_no_terms() && entry.is_exact()) {
                    continue;
                }
                // Sign of moving column j past the used columns to its right.
                let term = series_mul(entry, m);
                let term = if (used >> j).count_ones() % 2 == 1 { series_neg(&term) } else { term };
                let slot = next.entry(used | (1 << j)).or_insert_with(|| FractionalSeries::zero(nvars));
                *slot = series_add(slot, &term);
            }
        }
        next.retain(|_, m| !(m.has_no_terms() && m.is_exact()));
        minors = next;
    }
    minors.remove(&((1u32 << n) - 1)).unwrap_or_else(|| FractionalSeries::zero(nvars))
}

/// `a / b` for exact series with rational coefficients when `b` divides `a`
/// as a polynomial; `None` otherwise.
///
/// Long division on the lexicographically largest term: every quotient term
/// has its exponent bounded by `max(a) - min(b)` coordinatewise, which stops
/// the loop when `b` is not a divisor.
fn exact_quotient(a: &FractionalSeries, b: &FractionalSeries) -> Option<FractionalSeries> {
    let nvars = a.nvars();
    let to_map = |s: &FractionalSeries| -> Option<BTreeMap<RationalVector, BigQ>> {
        s.terms().iter().map(|(u, c)| Some((u.clone(), c.to_rational()?))).collect()
    };
    let mut rem = to_map(a)?;
    let divisor = to_map(b)?;
    let (lead_u, lead_c) = divisor.iter().next_back()?;
    let bound: Vec<Q> = (0..nvars)
        .map(|i| {
            let hi = rem.keys().map(|u| u.coords()[i]).max().unwrap_or_default();
            let lo = divisor.keys().map(|u| u.coords()[i]).min().unwrap_or_default();
            hi - lo
        })
        .collect();
    let mut quotient = Vec::new();
    while let Some((u, c)) = rem.pop_last() {
        let e = &u - lead_u;
        if !e.is_nonnegative() || e.coords().iter().zip(&bound).any(|(x, hi)| x > hi) {
            return None;
        }
        let q = c / lead_c;
        for (v, d) in divisor.iter().rev().skip(1) {
            let w = &e + v;
            let entry = rem.entry(w).or_insert_with(BigQ::zero);
            *entry -= &q * d;
            if entry.is_zero() {
                let w = &e + v;
                rem.remove(&w);
            }
        }
        quotient.push((e, CyclotomicNumber::from_rational(q)));
    }
    let denom = a.denom().lcm(&b.denom());
    Some(FractionalSeries::new(nvars, denom, None, quotient).expect("exponents lie in the common lattice"))
}

/// Fraction-free Gaussian elimination (Bareiss). Every entry after step `k`
/// is a minor of size `k + 2`, and the divisions are exact; `None` if a
/// division fails, which exactness rules out.
fn bareiss_det(a: &[Vec<FractionalSeries>], nvars: usize) -> Option<FractionalSeries> {
    let n = a.len();
    let is_zero = |s: &FractionalSeries| s.has_no_terms();
    let mut m = a.to_vec();
    let mut negate = false;
    let mut prev = FractionalSeries::one(nvars);
    for k in 0..n.saturating_sub(1) {
        if is_zero(&m[k][k]) {
            let Some(p) = (k + 1..n).find(|&i| !is_zero(&m[i][k])) else {
                return Some(FractionalSeries::zero(nvars));
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = series_sub(&series_mul(&m[i][j], &m[k][k]), &series_mul(&m[i][k], &m[k][j]));
                m[i][j] = exact_quotient(&num, &prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Some(if negate { series_neg(&det) } else { det })
}

fn determinant(a: &[Vec<FractionalSeries>], nvars: usize) -> FractionalSeries {
    let exact = a.iter().flatten().all(|s| s.is_exact() && s.has_rational_coefficients());
    if exact {
        if let Some(det) = bareiss_det(a, nvars) {
            return det;
        }
    }
    if a.len() <= MINOR_EXPANSION_LIMIT {
        minor_det(a, nvars)
    } else {
        berkowitz_det(a, nvars)
    }
}

/// Power sums `p_0, …, p_{count-1}` of the roots of the monic `f`, from
/// Newton's identities (no division is needed since `f` is monic).
fn power_sums(f: &WeierstrassPolynomial, count: usize) -> Vec<FractionalSeries> {
    let n = f.degree();
    let nvars = f.nvars;
    // e[k] is the coefficient of Y^{n-k}.
    let e: Vec<&FractionalSeries> = (0..=n).map(|k| if k == 0 { &f.coefficients[0] } else { &f.coefficients[n - k] }).collect();
    let mut p: Vec<FractionalSeries> = vec![FractionalSeries::one(nvars).scale(&CyclotomicNumber::from_integer(n as i64))];
    for k in 1..count {
        let mut acc = if k <= n { e[k].scale(&CyclotomicNumber::from_integer(k as i64)) } else { FractionalSeries::zero(nvars) };
        for i in 1..k.min(n + 1) {
            acc = series_add(&acc, &series_mul(e[i], &p[k - i]));
        }
        p.push(series_neg(&acc));
    }
    p
}

/// `Res_Y(f, ∂f/∂Y)`.
///
/// Computed as `(-1)^{n(n-1)/2}` times the determinant of the Hankel matrix
/// `(p_{i+j})` of power sums of the roots, which is `Π_{i<j} (r_i - r_j)^2`;
/// this equals the determinant of the Sylvester matrix of `f` and `f'` but
/// needs a matrix of size `n` instead of `2n - 1`.
pub fn discriminant(f: &WeierstrassPolynomial) -> Result<FractionalSeries> {
    let n = f.degree();
    if n < 2 {
        return Err(Error::InvalidArgument("the discriminant needs degree at least 2".into()));
    }
    let p = power_sums(f, 2 * n - 1);
    let hankel: Vec<Vec<FractionalSeries>> = (0..n).map(|i| (0..n).map(|j| p[i + j].clone()).collect()).collect();
    let mut det = determinant(&hankel, f.nvars);
    if (n * (n - 1) / 2) % 2 == 1 {
        det = series_neg(&det);
    }
    if det.has_no_terms() && !det.is_exact() {
        return Err(Error::TruncationTooCoarse("no term of the discriminant is known".into()));
    }
    Ok(det)
}

/// The same resultant as the determinant of the `(2n-1) x (2n-1)` Sylvester
/// matrix; kept as an independent check of [`discriminant`].
#[cfg(test)]
fn sylvester_discriminant(f: &WeierstrassPolynomial) -> FractionalSeries {
    let n = f.degree();
    let nvars = f.nvars;
    let full = f.full_coefficients();
    let deriv: Vec<FractionalSeries> = (1..=n)
        .map(|k| full[k].scale(&CyclotomicNumber::from_integer(k as i64)))
        .collect();
    let size = 2 * n - 1;
    let zero = FractionalSeries::zero(nvars);
    let mut rows: Vec<Vec<FractionalSeries>> = Vec::with_capacity(size);
    // n - 1 shifted copies of f, then n shifted copies of f', leading coefficient first.
    for shift in 0..n - 1 {
        let mut row = vec![zero.clone(); size];
        for (k, a) in full.iter().enumerate() {
            row[shift + n - k] = a.clone();
        }
        rows.push(row);
    }
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, a) in deriv.iter().enumerate() {
            row[shift + n - 1 - k] = a.clone();
        }
        rows.push(row);
    }
    berkowitz_det(&rows, nvars)
}

/// `Some(δ)` when the discriminant is `X^δ` times a unit.
pub fn is_quasi_ordinary(f: &WeierstrassPolynomial) -> Result<Option<RationalVector>> {
    let disc = discriminant(f)?;
    if disc.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    monomial_times_unit(&disc)
}

/// Characteristic exponents with the lattice tower and the semigroup `Γ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharacteristicData {
    pub exponents: Vec<RationalVector>,
    /// `M_0 = Z^d, M_1, …, M_g`.
    pub lattices: Vec<Sublattice>,
    pub indices: Vec<u64>,
    pub gammas: Vec<RationalVector>,
    pub gamma_semigroup: AffineSemigroup,
}

impl CharacteristicData {
    pub fn genus(&self) -> usize {
        self.exponents.len()
    }

    /// `M_g`.
    pub fn top_lattice(&self) -> &Sublattice {
        self.lattices.last().expect("M_0 is always present")
    }

    /// `n_1 ⋯ n_g`.
    pub fn index_product(&self) -> u64 {
        self.indices.iter().product()
    }
}

/// Builds `M_j = M_{j-1} + Z λ_j`, `n_j = [M_j : M_{j-1}]`, `γ_1 = λ_1`,
/// `γ_{j+1} = n_j γ_j + λ_{j+1} - λ_j` and `Γ = Z^d_{>=0} + Σ Z_{>=0} γ_j`.
pub fn lattice_tower(nvars: usize, lambdas: &[RationalVector]) -> Result<CharacteristicData> {
    for l in lambdas {
        if l.rank() != nvars {
            return Err(Error::RankMismatch { expected: nvars, found: l.rank() });
        }
    }
    for w in lambdas.windows(2) {
        if !w[0].le_coordinatewise(&w[1]) {
            return Err(Error::NotQuasiOrdinary(format!("exponents {} and {} are not ordered", w[0], w[1])));
        }
    }
    let mut lattices = vec![Sublattice::standard(nvars)];
    let mut indices = Vec::new();
    let mut gammas: Vec<RationalVector> = Vec::new();
    for (j, l) in lambdas.iter().enumerate() {
        let prev = lattices.last().expect("nonempty");
        let next = prev.extend(l)?;
        let n = lattice_index(prev, &next)?;
        if n < 2 {
            return Err(Error::DegenerateExponent(format!("λ_{} = {l} already lies in M_{j}", j + 1)));
        }
        let gamma = match gammas.last() {
            None => l.clone(),
            Some(g) => &(&g.scale(Q::from_integer(indices[j - 1] as i64)) + l) - &lambdas[j - 1],
        };
        gammas.push(gamma);
        indices.push(n);
        lattices.push(next);
    }
    let mut generators: Vec<RationalVector> = (0..nvars).map(|i| RationalVector::unit(nvars, i)).collect();
    generators.extend(gammas.iter().cloned());
    let m = generators.iter().fold(1i64, |acc, g| acc.lcm(&g.denominator()));
    let gamma_semigroup = AffineSemigroup::new(m, generators)?;
    Ok(CharacteristicData { exponents: lambdas.to_vec(), lattices, indices, gammas, gamma_semigroup })
}

/// Extracts `λ_{j+1}` as the smallest support exponent outside `M_j`, ordered
/// by total degree and then lexicographically.
fn extract_exponents(zeta: &FractionalSeries) -> Result<Vec<RationalVector>> {
    let mut support = zeta.support();
    support.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    let mut lattice = Sublattice::standard(zeta.nvars());
    let mut lambdas: Vec<RationalVector> = Vec::new();
    while let Some(u) = support.iter().find(|u| !lattice.contains(u)) {
        if let Some(prev) = lambdas.last() {
            if !prev.le_coordinatewise(u) {
                return Err(Error::NotQuasiOrdinary(format!("exponents {prev} and {u} are not ordered")));
            }
        }
        let u = u.clone();
        // Every exponent outside the current lattice must dominate the next
        // characteristic exponent.
        if let Some(v) = support.iter().find(|v| !lattice.contains(v) && !u.le_coordinatewise(v)) {
            return Err(Error::NotQuasiOrdinary(format!("exponent {v} lies outside M_{} but not above {u}", lambdas.len())));
        }
        lattice = lattice.extend(&u)?;
        lambdas.push(u);
    }
    if let (Some(t), Some(last)) = (zeta.trunc(), lambdas.last()) {
        if last.total() >= t {
            return Err(Error::TruncationTooCoarse(format!("exponent {last} is not below the truncation bound")));
        }
    }
    Ok(lambdas)
}

/// A quasi-ordinary branch `ζ ∈ C[[X^{1/m}]]`, validated on construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiOrdinaryBranch {
    series: FractionalSeries,
    data: CharacteristicData,
}

impl QuasiOrdinaryBranch {
    pub fn new(series: FractionalSeries) -> Result<Self> {
        if series.coefficient(&RationalVector::zero(series.nvars())).is_some() {
            return Err(Error::InvalidArgument("a branch must vanish at the origin".into()));
        }
        let lambdas = extract_exponents(&series)?;
        let data = lattice_tower(series.nvars(), &lambdas)?;
        Ok(Self { series, data })
    }

    pub fn series(&self) -> &FractionalSeries {
        &self.series
    }

    pub fn nvars(&self) -> usize {
        self.series.nvars()
    }

    pub fn denominator(&self) -> i64 {
        self.series.denom()
    }

    pub fn characteristic(&self) -> &CharacteristicData {
        &self.data
    }

    pub fn genus(&self) -> usize {
        self.data.genus()
    }
}

pub fn characteristic_exponents(zeta: &QuasiOrdinaryBranch) -> CharacteristicData {
    zeta.data.clone()
}

fn check_level(zeta: &QuasiOrdinaryBranch, j: usize) -> Result<()> {
    if j == 0 {
        return Err(Error::InvalidArgument("semiroot levels start at 1".into()));
    }
    if j > zeta.genus() && zeta.genus() > 0 {
        return Err(Error::InvalidArgument(format!("level {j} exceeds g = {}", zeta.genus())));
    }
    Ok(())
}

/// The terms of `ζ` with exponents in `M_{j-1}`. On a branch with `g = 0`
/// this is `ζ` itself.
pub fn truncated_branch(zeta: &QuasiOrdinaryBranch, j: usize) -> Result<FractionalSeries> {
    check_level(zeta, j)?;
    let lattice = &zeta.data.lattices[(j - 1).min(zeta.genus())];
    Ok(zeta.series.filter_terms(|u| lattice.contains(u)))
}

/// `q_j(ζ) = Π (ζ - τ)` over the distinct conjugates `τ` of the truncated branch.
pub fn semiroot_value(zeta: &QuasiOrdinaryBranch, j: usize) -> Result<FractionalSeries> {
    if zeta.genus() == 0 {
        return Err(Error::InvalidArgument("a branch with g = 0 has no semiroots".into()));
    }
    let trunc = truncated_branch(zeta, j)?;
    let value = conjugates(&trunc)
        .iter()
        .fold(FractionalSeries::one(zeta.nvars()), |acc, tau| series_mul(&acc, &series_sub(&zeta.series, tau)));
    if value.has_no_terms() {
        return Err(Error::TruncationTooCoarse(format!("no term of q_{j} is known")));
    }
    Ok(value)
}

/// `f = Π (Y - τ)` over the distinct conjugates of `ζ`.
pub fn branch_polynomial(zeta: &QuasiOrdinaryBranch) -> Result<WeierstrassPolynomial> {
    let degree = zeta.data.index_product() as usize;
    if degree > MAX_BRANCH_DEGREE {
        return Err(Error::DimensionTooLarge { found: degree, max: MAX_BRANCH_DEGREE });
    }
    let nvars = zeta.nvars();
    let roots = conjugates(&zeta.series);
    if roots.len() != degree {
        return Err(Error::NotGaloisStable(format!("{} conjugates for degree {degree}", roots.len())));
    }
    // Coefficients from Y^0 upward.
    let mut poly = vec![FractionalSeries::one(nvars)];
    for tau in &roots {
        let minus_tau = series_neg(tau);
        let mut next = vec![FractionalSeries::zero(nvars); poly.len() + 1];
        for (k, a) in poly.iter().enumerate() {
            next[k + 1] = series_add(&next[k + 1], a);
            next[k] = series_add(&next[k], &series_mul(a, &minus_tau));
        }
        poly = next;
    }
    poly.pop();
    for (k, a) in poly.iter().enumerate() {
        if let Some(u) = a.terms().keys().find(|u| !u.is_integral()) {
            return Err(Error::NotGaloisStable(format!("coefficient of Y^{k} has exponent {u}")));
        }
        if !a.has_rational_coefficients() {
            return Err(Error::NotGaloisStable(format!("coefficient of Y^{k} is not rational")));
        }
    }
    WeierstrassPolynomial::new(nvars, poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::series_sub;

    fn rv(items: &[&str]) -> RationalVector {
        RationalVector::parse(items).unwrap()
    }

    fn cx(c: i64, u: &[&str]) -> FractionalSeries {
        FractionalSeries::monomial(rv(u), CyclotomicNumber::from_integer(c))
    }

    fn sum(parts: &[FractionalSeries]) -> FractionalSeries {
        parts.iter().skip(1).fold(parts[0].clone(), |acc, p| series_add(&acc, p))
    }

    fn quad(b: FractionalSeries, c: FractionalSeries) -> WeierstrassPolynomial {
        WeierstrassPolynomial::new(c.nvars(), vec![c, b]).unwrap()
    }

    fn lipman() -> QuasiOrdinaryBranch {
        QuasiOrdinaryBranch::new(series_add(&cx(1, &["1/2", "0"]), &cx(1, &["1/2", "1/2"]))).unwrap()
    }

    #[test]
    fn quadratic_discriminant_is_closed_form() {
        let b = cx(3, &["1", "0"]);
        let c = sum(&[cx(1, &["0", "1"]), cx(-2, &["1", "1"])]);
        let d = discriminant(&quad(b.clone(), c.clone())).unwrap();
        let closed = series_sub(&series_mul(&b, &b), &c.scale(&CyclotomicNumber::from_integer(4)));
        assert!(up_to_sign(&d, &closed));
    }

    fn up_to_sign(a: &FractionalSeries, b: &FractionalSeries) -> bool {
        a == b || *a == series_neg(b)
    }

    #[test]
    fn discriminant_examples() {
        let f = quad(FractionalSeries::zero(2), cx(-1, &["1", "1"]));
        assert!(up_to_sign(&discriminant(&f).unwrap(), &cx(4, &["1", "1"])));
        assert_eq!(is_quasi_ordinary(&f).unwrap(), Some(rv(&["1", "1"])));
        let f = quad(FractionalSeries::zero(2), sum(&[cx(-1, &["1", "0"]), cx(-1, &["0", "1"])]));
        assert!(up_to_sign(&discriminant(&f).unwrap(), &sum(&[cx(4, &["1", "0"]), cx(4, &["0", "1"])])));
        assert_eq!(is_quasi_ordinary(&f).unwrap(), None);
        let f = quad(FractionalSeries::zero(1), cx(-1, &["3"]));
        assert_eq!(is_quasi_ordinary(&f).unwrap(), Some(rv(&["3"])));
    }

    #[test]
    fn non_reduced_polynomial_has_zero_discriminant() {
        // (Y - X)^2
        let f = quad(cx(-2, &["1"]), cx(1, &["2"]));
        assert_eq!(is_quasi_ordinary(&f), Err(Error::ZeroDiscriminant));
    }

    #[test]
    fn cubic_discriminant_matches_closed_form() {
        // Y^3 + pY + q has discriminant -4p^3 - 27q^2; the resultant with f' is
        // 4p^3 + 27q^2 up to sign.
        let p = cx(1, &["2"]);
        let q = cx(1, &["3"]);
        let f = WeierstrassPolynomial::new(1, vec![q.clone(), p.clone(), FractionalSeries::zero(1)]).unwrap();
        let closed = series_add(&p.pow(3).scale(&CyclotomicNumber::from_integer(4)), &q.pow(2).scale(&CyclotomicNumber::from_integer(27)));
        let d = discriminant(&f).unwrap();
        assert!(up_to_sign(&d, &closed), "{d}");
    }

    #[test]
    fn weierstrass_validation() {
        assert!(matches!(WeierstrassPolynomial::new(1, vec![cx(1, &["1/2"])]), Err(Error::NotWeierstrass(_))));
        assert!(matches!(WeierstrassPolynomial::new(1, vec![cx(1, &["0"])]), Err(Error::NotWeierstrass(_))));
    }

    #[test]
    fn characteristic_exponent_examples() {
        let cusp = QuasiOrdinaryBranch::new(cx(1, &["3/2"])).unwrap();
        assert_eq!(cusp.characteristic().exponents, vec![rv(&["3/2"])]);
        assert_eq!(lipman().characteristic().exponents, vec![rv(&["1/2", "0"]), rv(&["1/2", "1/2"])]);
        let smooth = QuasiOrdinaryBranch::new(series_add(&cx(1, &["1", "0"]), &cx(1, &["2", "0"]))).unwrap();
        assert!(smooth.characteristic().exponents.is_empty());
    }

    #[test]
    fn unordered_exponents_are_rejected() {
        let zeta = series_add(&cx(1, &["1/2", "0"]), &cx(1, &["0", "1/3"]));
        assert!(matches!(QuasiOrdinaryBranch::new(zeta), Err(Error::NotQuasiOrdinary(_))));
    }

    #[test]
    fn lattice_tower_examples() {
        let t = lattice_tower(1, &[rv(&["3/2"])]).unwrap();
        assert_eq!(t.indices, vec![2]);
        assert_eq!(t.gammas, vec![rv(&["3/2"])]);
        let mingens = t.gamma_semigroup.minimal_generators().unwrap();
        assert_eq!(mingens, vec![rv(&["1"]), rv(&["3/2"])]);
        assert_eq!(t.gamma_semigroup.denominator(), 2);

        let t = lattice_tower(2, &[rv(&["1/2", "0"]), rv(&["1/2", "1/2"])]).unwrap();
        assert_eq!(t.indices, vec![2, 2]);
        assert_eq!(t.gammas, vec![rv(&["1/2", "0"]), rv(&["1", "1/2"])]);

        let t = lattice_tower(2, &[rv(&["1", "1/2"])]).unwrap();
        assert_eq!(t.indices, vec![2]);
        assert_eq!(t.gammas, vec![rv(&["1", "1/2"])]);

        assert!(matches!(lattice_tower(1, &[rv(&["1/2"]), rv(&["3/2"])]), Err(Error::DegenerateExponent(_))));
    }

    #[test]
    fn truncated_branch_examples() {
        let z = lipman();
        assert!(truncated_branch(&z, 1).unwrap().is_zero());
        assert_eq!(truncated_branch(&z, 2).unwrap(), cx(1, &["1/2", "0"]));
        let smooth = QuasiOrdinaryBranch::new(cx(1, &["1", "1"])).unwrap();
        assert_eq!(truncated_branch(&smooth, 1).unwrap(), cx(1, &["1", "1"]));
    }

    #[test]
    fn semiroot_examples() {
        let cusp = QuasiOrdinaryBranch::new(cx(1, &["3/2"])).unwrap();
        assert_eq!(semiroot_value(&cusp, 1).unwrap(), cx(1, &["3/2"]));
        let q2 = semiroot_value(&lipman(), 2).unwrap();
        assert_eq!(q2, series_add(&cx(2, &["1", "1/2"]), &cx(1, &["1", "1"])));
    }

    #[test]
    fn branch_polynomial_examples() {
        let cusp = QuasiOrdinaryBranch::new(cx(1, &["3/2"])).unwrap();
        let f = branch_polynomial(&cusp).unwrap();
        assert_eq!(f.coefficients(), &[cx(-1, &["3"]), FractionalSeries::zero(1)]);

        let f = branch_polynomial(&lipman()).unwrap();
        // (Y^2 - X1 - X1X2)^2 - 4 X1^2 X2
        let s = sum(&[cx(1, &["1", "0"]), cx(1, &["1", "1"])]);
        let expected = vec![
            series_sub(&series_mul(&s, &s), &cx(4, &["2", "1"])),
            FractionalSeries::zero(2),
            series_neg(&s.scale(&CyclotomicNumber::from_integer(2))),
            FractionalSeries::zero(2),
        ];
        assert_eq!(f.coefficients(), expected.as_slice());
        assert!(f.evaluate(lipman().series()).is_zero());
        assert!(is_quasi_ordinary(&f).unwrap().is_some());

        let smooth = QuasiOrdinaryBranch::new(cx(1, &["1", "1"])).unwrap();
        assert_eq!(branch_polynomial(&smooth).unwrap().coefficients(), &[cx(-1, &["1", "1"])]);
    }

    fn arb_coefficient(d: usize) -> impl proptest::strategy::Strategy<Value = FractionalSeries> {
        use proptest::prelude::*;
        proptest::collection::vec((proptest::collection::vec(0i64..=2, d), -2i64..=2), 0..=3).prop_map(move |terms| {
            let terms = terms
                .into_iter()
                .filter(|(u, c)| *c != 0 && u.iter().any(|&x| x != 0))
                .map(|(u, c)| (RationalVector::from_ints(&u), CyclotomicNumber::from_integer(c)));
            FractionalSeries::new(d, 1, None, terms).unwrap()
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn hankel_and_sylvester_agree(coeffs in proptest::collection::vec(arb_coefficient(2), 2..=4), t in proptest::option::of(4i64..=8)) {
            let coeffs: Vec<FractionalSeries> = coeffs.iter().map(|c| c.with_truncation(t.map(Q::from_integer))).collect();
            let f = WeierstrassPolynomial::new(2, coeffs).unwrap();
            // Both are sound; compare below the smaller of their bounds.
            let b = sylvester_discriminant(&f);
            match discriminant(&f) {
                Ok(a) => {
                    let t = [a.trunc(), b.trunc()].into_iter().flatten().min();
                    let cut = |s: &FractionalSeries| t.map_or(s.clone(), |t| s.truncated(t));
                    proptest::prop_assert_eq!(cut(&a), cut(&b));
                }
                Err(Error::TruncationTooCoarse(_)) => {}
                Err(e) => proptest::prop_assert!(false, "{}", e),
            }
        }
    }

    #[test]
    fn hankel_matches_sylvester_on_a_branch_polynomial() {
        let zeta = QuasiOrdinaryBranch::new(sum(&[cx(1, &["3/2"]), cx(5, &["2"]), cx(2, &["5/3"])])).unwrap();
        let f = branch_polynomial(&zeta).unwrap();
        let a = discriminant(&f).unwrap();
        let b = sylvester_discriminant(&f);
        assert_eq!(a, b, "{f}");
    }

    proptest::proptest! {
        #[test]
        fn minor_expansion_matches_berkowitz(
            n in 1usize..=5,
            entries in proptest::collection::vec(arb_coefficient(2), 25),
            diag in proptest::collection::vec(-2i64..=2, 5),
        ) {
            let a: Vec<Vec<FractionalSeries>> = (0..n)
                .map(|i| (0..n).map(|j| {
                    let e = entries[i * 5 + j].clone();
                    if i == j { series_add(&e, &FractionalSeries::one(2).scale(&CyclotomicNumber::from_integer(diag[i]))) } else { e }
                }).collect())
                .collect();
            let expected = berkowitz_det(&a, 2);
            proptest::prop_assert_eq!(minor_det(&a, 2), expected.clone());
            proptest::prop_assert_eq!(bareiss_det(&a, 2), Some(expected));
        }
    }
}
