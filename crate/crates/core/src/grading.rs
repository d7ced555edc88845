//! Divisorial valuations, leading forms and executable checks of the graded
//! isomorphisms attached to toric and quasi-ordinary germs.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{format_rational, RationalVector};
use crate::newton::{dual_newton_diagram, exceptional_edges, polyhedron_from_support, Fan};
use crate::qo::{semiroot_value, QuasiOrdinaryBranch};
use crate::semigroup::{are_isomorphic, AffineSemigroup, SemigroupIsomorphism};
use crate::series::{minimal_weight, series_mul, symbolic_restriction, FractionalSeries};
use crate::Q;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_240_229;

/// `ν_D(φ) = min <n, u>` over the support of `φ`.
pub fn divisorial_valuation(phi: &FractionalSeries, n: &RationalVector) -> Result<u64> {
    let min = minimal_weight(phi, n)?;
    if !min.is_integer() {
        return Err(Error::NonIntegralValue(format!("<{n}, u> = {} at the minimum", format_rational(&min))));
    }
    Ok(min.to_integer() as u64)
}

/// The terms of `φ` of weight `ν_D(φ)`.
pub fn leading_form(phi: &FractionalSeries, n: &RationalVector) -> Result<FractionalSeries> {
    let nu = divisorial_valuation(phi, n)?;
    let lf = symbolic_restriction(phi, n)?;
    assert!(
        lf.terms().keys().all(|u| n.dot(u) == Q::from_integer(nu as i64)),
        "leading form has a term off the minimal weight"
    );
    Ok(lf)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub samples: u64,
    pub passed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<String>,
}

/// Finite-grade evidence for a graded isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedReport {
    pub weight: Vec<String>,
    pub max_grade: u32,
    pub dims_semigroup: Vec<u64>,
    pub dims_filtration: Vec<u64>,
    pub multiplicativity: SampleSummary,
    /// Semigroup generator to an element whose leading form is the matching monomial.
    pub leading_form_witnesses: BTreeMap<String, String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub caveat: Option<String>,
}

struct Checks {
    first_failure: Option<String>,
}

impl Checks {
    fn new() -> Self {
        Self { first_failure: None }
    }

    fn fail(&mut self, msg: String) {
        self.first_failure.get_or_insert(msg);
    }

    fn verdict(self) -> Verdict {
        Verdict { pass: self.first_failure.is_none(), counterexample: self.first_failure }
    }
}

/// A finite sum `Σ c_u X^u` of the semigroup algebra. Exponents may have
/// negative coordinates, so these are kept apart from power series.
type AlgebraElement = BTreeMap<RationalVector, i64>;

fn algebra_mul(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::new();
    for (u, c) in a {
        for (v, e) in b {
            *out.entry(u + v).or_insert(0) += c * e;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn algebra_leading(a: &AlgebraElement, n: &RationalVector) -> AlgebraElement {
    let min = a.keys().map(|u| n.dot(u)).min().expect("nonzero element");
    a.iter().filter(|(u, _)| n.dot(u) == min).map(|(u, c)| (u.clone(), *c)).collect()
}

fn algebra_to_string(a: &AlgebraElement) -> String {
    let parts: Vec<String> = a.iter().map(|(u, c)| format!("{c}*X^{u}")).collect();
    parts.join(" + ")
}

fn monomial_name(u: &RationalVector) -> String {
    format!("X^{u}")
}

/// Checks that `(gr_D(Z^Λ, 0), m_D)` matches `(C[Λ]^{(n)}, m^{(n)})` up to grade
/// `max_grade`: leading forms are multiplicative on random elements, every
/// monomial `X^u` is its own leading form, and the leading exponents of the
/// monomial basis give the graded dimensions of the semigroup.
pub fn verify_toric_graded_iso(
    s: &AffineSemigroup,
    n: &RationalVector,
    max_grade: u32,
    samples: u64,
    seed: u64,
) -> Result<GradedReport> {
    if !s.has_vertex() {
        return Err(Error::NoVertex);
    }
    let layers = s.elements_by_weight(n, max_grade)?;
    let dims_semigroup: Vec<u64> = layers.iter().map(|l| l.len() as u64).collect();
    let mut checks = Checks::new();

    let elements: Vec<RationalVector> = layers.iter().flatten().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_element = |rng: &mut ChaCha8Rng| -> AlgebraElement {
        let count = rng.gen_range(1..=4usize);
        let mut a = AlgebraElement::new();
        for u in elements.choose_multiple(rng, count) {
            let c = loop {
                let c = rng.gen_range(-5i64..=5);
                if c != 0 {
                    break c;
                }
            };
            a.insert(u.clone(), c);
        }
        a
    };
    let mut passed = 0;
    for _ in 0..samples {
        let phi = random_element(&mut rng);
        let psi = random_element(&mut rng);
        let lhs = algebra_leading(&algebra_mul(&phi, &psi), n);
        let rhs = algebra_mul(&algebra_leading(&phi, n), &algebra_leading(&psi, n));
        if lhs == rhs {
            passed += 1;
        } else {
            checks.fail(format!(
                "leading form of ({}) * ({}) is {}",
                algebra_to_string(&phi),
                algebra_to_string(&psi),
                algebra_to_string(&lhs)
            ));
        }
    }

    let mut witnesses = BTreeMap::new();
    for u in s.minimal_generators()? {
        witnesses.insert(u.to_string(), monomial_name(&u));
    }
    let mut realized: Vec<BTreeSet<RationalVector>> = vec![BTreeSet::new(); max_grade as usize + 1];
    for u in &elements {
        let x: AlgebraElement = [(u.clone(), 1)].into_iter().collect();
        let lf = algebra_leading(&x, n);
        if lf != x {
            checks.fail(format!("X^{u} is not its own leading form"));
            continue;
        }
        let k = n.dot(u).to_integer() as usize;
        realized[k].insert(u.clone());
    }
    let dims_filtration: Vec<u64> = realized.iter().map(|r| r.len() as u64).collect();
    if dims_filtration != dims_semigroup {
        checks.fail(format!("filtration dimensions {dims_filtration:?} differ from {dims_semigroup:?}"));
    }
    Ok(GradedReport {
        weight: n.to_strings(),
        max_grade,
        dims_semigroup,
        dims_filtration,
        multiplicativity: SampleSummary { samples, passed },
        leading_form_witnesses: witnesses,
        verdict: checks.verdict(),
        caveat: None,
    })
}

/// A member `X^a · Π q_j^{b_j}` of the monomial family of a branch.
#[derive(Clone)]
struct FamilyMember {
    a: RationalVector,
    b: Vec<u64>,
}

impl FamilyMember {
    fn describe(&self) -> String {
        let mut s = format!("X^{}", self.a);
        for (j, e) in self.b.iter().enumerate() {
            if *e > 0 {
                s.push_str(&format!("*q_{}^{e}", j + 1));
            }
        }
        s
    }
}

/// All integer points `a >= 0` with `<n, a> <= bound`, for positive integral `n`.
fn orthant_points(n: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n.len()];
    fn go(i: usize, n: &[i64], left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == n.len() {
            out.push(cur.clone());
            return;
        }
        let mut k = 0;
        while k * n[i] <= left {
            cur[i] = k;
            go(i + 1, n, left - k * n[i], cur, out);
            k += 1;
        }
        cur[i] = 0;
    }
    go(0, n, bound, &mut cur, &mut out);
    out
}

const QO_CAVEAT: &str = "dims_filtration counts distinct leading exponents realized by the family \
X^a * prod q_j^b_j (0 <= b_j < n_j); this equals the dimension of the graded piece when the family spans it";

/// Checks that `(gr_D(S, 0), m_D)` matches `(gr_D(Z^Γ, 0), m_D)` up to grade
/// `max_grade` for the branch `ζ` and the weight `n`.
pub fn verify_qo_graded_iso(
    zeta: &QuasiOrdinaryBranch,
    n: &RationalVector,
    max_grade: u32,
    samples: u64,
    seed: u64,
) -> Result<GradedReport> {
    let data = zeta.characteristic();
    let d = zeta.nvars();
    if n.rank() != d {
        return Err(Error::RankMismatch { expected: d, found: n.rank() });
    }
    if !data.top_lattice().dual_contains(n) {
        return Err(Error::WeightNotInDualLattice(n.to_string()));
    }
    if !n.is_positive() {
        return Err(Error::BoundaryWeight(n.to_string()));
    }
    let dims_semigroup = data.gamma_semigroup.graded_dims(n, max_grade)?;
    let mut checks = Checks::new();
    let mut witnesses = BTreeMap::new();
    for i in 0..d {
        let e = RationalVector::unit(d, i);
        witnesses.insert(e.to_string(), format!("X_{}", i + 1));
    }

    let semiroots: Vec<FractionalSeries> = (1..=data.genus()).map(|j| semiroot_value(zeta, j)).collect::<Result<_>>()?;
    for (j, q) in semiroots.iter().enumerate() {
        let lf = leading_form(q, n)?;
        let gamma = &data.gammas[j];
        if lf.terms().len() == 1 && lf.coefficient(gamma).is_some() {
            witnesses.insert(gamma.to_string(), format!("q_{}", j + 1));
        } else {
            checks.fail(format!("leading form of q_{} is {lf}, expected a multiple of X^{gamma}", j + 1));
        }
    }

    // Products Π q_j^{b_j} for 0 <= b_j < n_j.
    let mut powers: Vec<(Vec<u64>, FractionalSeries)> = vec![(Vec::new(), FractionalSeries::one(d))];
    for (j, q) in semiroots.iter().enumerate() {
        let mut next = Vec::new();
        for (b, p) in &powers {
            let mut acc = p.clone();
            for e in 0..data.indices[j] {
                let mut b2 = b.clone();
                b2.push(e);
                next.push((b2, acc.clone()));
                acc = series_mul(&acc, q);
            }
        }
        powers = next;
    }
    let weights: Vec<i64> = n.coords().iter().map(|x| x.to_integer()).collect();
    let max = i64::from(max_grade);
    let mut realized: Vec<BTreeSet<RationalVector>> = vec![BTreeSet::new(); max_grade as usize + 1];
    let mut family: Vec<(FamilyMember, FractionalSeries)> = Vec::new();
    for (b, p) in &powers {
        let lf = leading_form(p, n)?;
        let nu = n.dot(lf.terms().keys().next().expect("nonzero leading form")).to_integer();
        if nu > max {
            continue;
        }
        for a in orthant_points(&weights, max - nu) {
            let a = RationalVector::from_ints(&a);
            let member = FamilyMember { a: a.clone(), b: b.clone() };
            let value = p.shift(&a);
            let lf = leading_form(&value, n)?;
            if lf.terms().len() != 1 {
                checks.fail(format!("leading form of {} is {lf}, not a monomial", member.describe()));
                continue;
            }
            let u = lf.terms().keys().next().expect("one term").clone();
            realized[n.dot(&u).to_integer() as usize].insert(u);
            family.push((member, value));
        }
    }
    let dims_filtration: Vec<u64> = realized.iter().map(|r| r.len() as u64).collect();
    if dims_filtration != dims_semigroup {
        checks.fail(format!("realized leading exponents {dims_filtration:?} differ from {dims_semigroup:?}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    for _ in 0..samples {
        let (ma, phi) = family.choose(&mut rng).expect("family contains 1");
        let (mb, psi) = family.choose(&mut rng).expect("family contains 1");
        let lhs = leading_form(&series_mul(phi, psi), n)?;
        let rhs = series_mul(&leading_form(phi, n)?, &leading_form(psi, n)?);
        if lhs == rhs {
            passed += 1;
        } else {
            checks.fail(format!("leading form of {} * {} is {lhs}", ma.describe(), mb.describe()));
        }
    }

    Ok(GradedReport {
        weight: n.to_strings(),
        max_grade,
        dims_semigroup,
        dims_filtration,
        multiplicativity: SampleSummary { samples, passed },
        leading_form_witnesses: witnesses,
        verdict: checks.verdict(),
        caveat: Some(QO_CAVEAT.to_string()),
    })
}

/// Isomorphism of the semigroups `Γ` of two branches.
pub fn invariance_check(a: &QuasiOrdinaryBranch, b: &QuasiOrdinaryBranch) -> Result<Option<SemigroupIsomorphism>> {
    are_isomorphic(&a.characteristic().gamma_semigroup, &b.characteristic().gamma_semigroup)
}

/// The dual Newton diagram of the normalized blow-up of the toric germ of `Λ`
/// at its zero orbit.
///
/// The blow-up is given by the diagram of `ρ^∨ ∩ M - {0}`, where `M` is the
/// group of `Λ` and `ρ^∨` its cone; that polyhedron is the convex hull of the
/// Hilbert basis of the saturation plus the cone.
pub fn blowup_fan(s: &AffineSemigroup) -> Result<Fan> {
    let cone = s.cone();
    if !cone.is_full_dimensional() {
        return Err(Error::InvalidArgument("the cone of the semigroup must be full-dimensional".into()));
    }
    let saturation = s.saturation()?;
    let p = polyhedron_from_support(saturation.generators(), &cone)?;
    dual_newton_diagram(&p, &cone.dual())
}

/// Primitive weights of the exceptional divisors of the normalized blow-up:
/// for each exceptional edge of [`blowup_fan`], its primitive vector in the
/// dual lattice `N` of the group of `Λ`.
pub fn blowup_weights(s: &AffineSemigroup) -> Result<Vec<RationalVector>> {
    let fan = blowup_fan(s)?;
    let group = s.group();
    exceptional_edges(&fan, fan.support()).iter().map(|e| group.primitive_dual_on_ray(e)).collect()
}
