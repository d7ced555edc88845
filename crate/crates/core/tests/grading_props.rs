use proptest::prelude::*;

use qo_toric::grading::{divisorial_valuation, leading_form, verify_toric_graded_iso};
use qo_toric::series::series_add;
use qo_toric::{AffineSemigroup, CyclotomicNumber, FractionalSeries, IntVector, RationalVector};

fn series(d: usize) -> impl Strategy<Value = FractionalSeries> {
    proptest::collection::vec((proptest::collection::vec(0i64..=4, 3), -3i64..=3), 1..=6).prop_map(move |terms| {
        terms.into_iter().filter(|(_, c)| *c != 0).fold(FractionalSeries::zero(d), |acc, (u, c)| {
            series_add(&acc, &FractionalSeries::monomial(RationalVector::from_ints(&u[..d]), CyclotomicNumber::from_integer(c)))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leading_forms_sit_at_the_valuation(phi in series(2), w in proptest::collection::vec(1i64..=5, 2)) {
        prop_assume!(!phi.is_zero());
        let n = RationalVector::from_ints(&w);
        let nu = divisorial_valuation(&phi, &n).unwrap();
        let lf = leading_form(&phi, &n).unwrap();
        prop_assert!(!lf.is_zero());
        for u in lf.support() {
            prop_assert_eq!(n.dot(&u), (nu as i64).into());
        }
    }

    #[test]
    fn toric_filtration_matches_the_semigroup(
        rows in proptest::collection::vec(proptest::collection::vec(0i64..=3, 2), 1..=4),
        w in proptest::collection::vec(1i64..=3, 2),
        seed in any::<u64>(),
    ) {
        let gens: Vec<IntVector> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
        prop_assume!(!gens.is_empty());
        let s = AffineSemigroup::from_scaled(1, &gens).unwrap();
        let n = RationalVector::from_ints(&w);
        let report = verify_toric_graded_iso(&s, &n, 6, 10, seed).unwrap();
        prop_assert!(report.verdict.pass, "{:?}", report.verdict);
        prop_assert_eq!(&report.dims_filtration, &s.graded_dims(&n, 6).unwrap());
    }
}
