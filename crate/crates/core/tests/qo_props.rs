use proptest::prelude::*;

use qo_toric::lattice::{lattice_index, lattice_member};
use qo_toric::newton::{dual_newton_diagram, exceptional_edges, face_of};
use qo_toric::qo::{branch_polynomial, is_quasi_ordinary, semiroot_value, QuasiOrdinaryBranch};
use qo_toric::series::{newton_polyhedron, series_add, symbolic_restriction};
use qo_toric::{Cone, CyclotomicNumber, FractionalSeries, RationalVector};

fn rv(items: &[&str]) -> RationalVector {
    RationalVector::parse(items).unwrap()
}

fn make(d: usize, terms: &[(RationalVector, i64)]) -> FractionalSeries {
    terms.iter().fold(FractionalSeries::zero(d), |acc, (u, c)| {
        series_add(&acc, &FractionalSeries::monomial(u.clone(), CyclotomicNumber::from_integer(*c)))
    })
}

fn catalogue() -> Vec<QuasiOrdinaryBranch> {
    let cases: Vec<(usize, Vec<(&[&str], i64)>)> = vec![
        (1, vec![(&["3/2"], 1)]),
        (1, vec![(&["2/3"], 1)]),
        (1, vec![(&["3/2"], 1), (&["7/4"], 1)]),
        (1, vec![(&["3/2"], 1), (&["2"], 5), (&["5/3"], 2)]),
        (2, vec![(&["1/2", "0"], 1), (&["1/2", "1/2"], 1)]),
        (2, vec![(&["1", "1/2"], 1)]),
        (2, vec![(&["1/3", "1/2"], 1)]),
        (2, vec![(&["3/2", "1"], 1), (&["7/4", "1"], -1)]),
        (3, vec![(&["1/2", "1/2", "0"], 1), (&["1", "1/2", "1/3"], 1)]),
    ];
    cases
        .into_iter()
        .map(|(d, terms)| {
            let terms: Vec<(RationalVector, i64)> = terms.into_iter().map(|(u, c)| (rv(u), c)).collect();
            QuasiOrdinaryBranch::new(make(d, &terms)).unwrap()
        })
        .collect()
}

/// A branch built from a chain of exponents `λ_1 <= λ_2 <= ...`, or `None` when
/// the chain does not define a valid branch.
fn random_branch() -> impl Strategy<Value = Option<QuasiOrdinaryBranch>> {
    (1usize..=2, proptest::collection::vec((proptest::collection::vec(0i64..=3, 2), 2i64..=3), 1..=3), -2i64..=2)
        .prop_map(|(d, steps, c)| {
            let mut lambda = RationalVector::zero(d);
            let mut terms = Vec::new();
            for (inc, den) in steps {
                lambda = &lambda + &RationalVector::from_scaled(&inc[..d], den);
                terms.push((lambda.clone(), 1));
            }
            if c != 0 {
                terms.push((&lambda + &RationalVector::unit(d, 0), c));
            }
            QuasiOrdinaryBranch::new(make(d, &terms)).ok().filter(|z| z.genus() >= 1 && z.characteristic().index_product() <= 8)
        })
}

fn check_degree(zeta: &QuasiOrdinaryBranch) -> Result<(), TestCaseError> {
    let data = zeta.characteristic();
    let f = branch_polynomial(zeta).unwrap();
    prop_assert_eq!(f.degree() as u64, data.index_product());
    prop_assert_eq!(lattice_index(&data.lattices[0], data.top_lattice()).unwrap(), data.index_product());
    prop_assert!(is_quasi_ordinary(&f).unwrap().is_some(), "{} is not recognized", zeta.series());
    Ok(())
}

/// Whenever `n` isolates `γ_j` on the Newton polyhedron of `q_j`, the leading
/// form of `q_j` is a single term at `γ_j`.
fn check_leading_forms(zeta: &QuasiOrdinaryBranch, extra: &[RationalVector]) -> Result<(), TestCaseError> {
    let data = zeta.characteristic();
    let d = zeta.nvars();
    for j in 1..=zeta.genus() {
        let q = semiroot_value(zeta, j).unwrap();
        let p = newton_polyhedron(&q).unwrap();
        let sigma = Cone::orthant(d);
        let mut weights = exceptional_edges(&dual_newton_diagram(&p, &sigma).unwrap(), &sigma);
        weights.extend_from_slice(extra);
        let gamma = &data.gammas[j - 1];
        for n in &weights {
            if face_of(&p, n).unwrap() == [gamma.clone()] {
                let lf = symbolic_restriction(&q, n).unwrap();
                prop_assert_eq!(lf.support(), vec![gamma.clone()], "q_{} at {}", j, n);
            }
        }
    }
    Ok(())
}

#[test]
fn catalogue_degrees_match_indices() {
    for zeta in catalogue() {
        check_degree(&zeta).unwrap();
    }
}

#[test]
fn catalogue_gamma_lies_in_the_top_lattice() {
    for zeta in catalogue() {
        let data = zeta.characteristic();
        for g in data.gamma_semigroup.generators() {
            assert!(lattice_member(g, data.top_lattice()) && g.is_nonnegative(), "{g}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn catalogue_leading_form_law(w in proptest::collection::vec(proptest::collection::vec(1i64..=7, 3), 20)) {
        for zeta in catalogue() {
            let extra: Vec<RationalVector> = w.iter().map(|v| RationalVector::from_ints(&v[..zeta.nvars()])).collect();
            check_leading_forms(&zeta, &extra)?;
        }
    }

    #[test]
    fn random_branches_behave(zeta in random_branch(), w in proptest::collection::vec(proptest::collection::vec(1i64..=7, 2), 5)) {
        let Some(zeta) = zeta else { return Ok(()) };
        check_degree(&zeta)?;
        let extra: Vec<RationalVector> = w.iter().map(|v| RationalVector::from_ints(&v[..zeta.nvars()])).collect();
        check_leading_forms(&zeta, &extra)?;
    }

    #[test]
    fn exponents_are_stable(idx in 0usize..9, shift in proptest::collection::vec(0i64..=2, 3), c in 1i64..=3) {
        let all = catalogue();
        let zeta = &all[idx];
        let data = zeta.characteristic();
        let d = zeta.nvars();
        // Reordering the terms.
        let mut terms: Vec<(RationalVector, i64)> = zeta
            .series()
            .terms()
            .iter()
            .map(|(u, c)| (u.clone(), c.to_rational().unwrap().to_integer().try_into().unwrap()))
            .collect();
        terms.reverse();
        let reordered = QuasiOrdinaryBranch::new(make(d, &terms)).unwrap();
        prop_assert_eq!(reordered.characteristic(), data);
        // Appending a term of M_g above λ_g.
        let top = data.exponents.last().unwrap();
        let extra = &(top + &RationalVector::from_ints(&shift[..d])) + &RationalVector::unit(d, 0);
        prop_assert!(lattice_member(&extra, data.top_lattice()));
        terms.push((extra, c));
        let longer = QuasiOrdinaryBranch::new(make(d, &terms)).unwrap();
        prop_assert_eq!(&longer.characteristic().exponents, &data.exponents);
    }
}
