use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qo_toric::semigroup::{are_isomorphic, minimal_generators, semigroup_member, AffineSemigroup};
use qo_toric::{IntVector, RationalVector};

/// Generators in the positive orthant, so the cone always has a vertex.
fn orthant_semigroup() -> impl Strategy<Value = AffineSemigroup> {
    (1usize..=3, proptest::collection::vec(proptest::collection::vec(0i64..=4, 3), 1..=5), 1i64..=2).prop_filter_map(
        "zero generators",
        |(d, rows, m)| {
            let gens: Vec<IntVector> = rows.into_iter().map(|r| r[..d].to_vec()).filter(|r| r.iter().any(|&x| x != 0)).collect();
            (!gens.is_empty()).then(|| AffineSemigroup::from_scaled(m, &gens).unwrap())
        },
    )
}

fn unimodular(seed: u64, d: usize) -> Vec<IntVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m: Vec<IntVector> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..(2 * d) {
        if d == 1 {
            break;
        }
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        let k = rng.gen_range(-2..=2);
        for c in 0..d {
            m[i][c] += k * m[j][c];
        }
    }
    m.reverse();
    m
}

fn transform(s: &AffineSemigroup, u: &[IntVector]) -> AffineSemigroup {
    let d = s.rank();
    let mut gens: Vec<IntVector> =
        s.scaled_generators().iter().map(|g| (0..d).map(|j| (0..d).map(|i| g[i] * u[i][j]).sum()).collect()).collect();
    gens.rotate_left(1);
    AffineSemigroup::from_scaled(s.denominator(), &gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn saturation_is_a_closure(s in orthant_semigroup()) {
        let sat = s.saturation().unwrap();
        prop_assert_eq!(sat.saturation().unwrap().minimal_generators().unwrap(), sat.minimal_generators().unwrap());
        prop_assert!(sat.contains_semigroup(&s).unwrap());
        prop_assert_eq!(sat.cone(), s.cone());
        prop_assert_eq!(sat.group(), s.group());
    }

    #[test]
    fn saturation_has_larger_graded_pieces(s in orthant_semigroup(), w in proptest::collection::vec(1i64..=3, 3)) {
        let n = RationalVector::from_ints(&w[..s.rank()]);
        // Integer weights are integral on (1/m)Z^d only after scaling by m.
        let n = n.scale(s.denominator().into());
        let sat = s.saturation().unwrap();
        let small = s.graded_dims(&n, 6).unwrap();
        let large = sat.graded_dims(&n, 6).unwrap();
        prop_assert!(small.iter().zip(&large).all(|(a, b)| a <= b), "{:?} vs {:?}", small, large);
    }

    #[test]
    fn minimal_generators_ignore_the_presentation(s in orthant_semigroup(), picks in proptest::collection::vec((0usize..8, 0usize..8), 0..=3)) {
        let mut gens = s.generators().to_vec();
        let k = gens.len();
        for (i, j) in picks {
            gens.push(&gens[i % k] + &gens[j % k]);
        }
        gens.reverse();
        let t = AffineSemigroup::new(s.denominator(), gens).unwrap();
        prop_assert!(s.contains_semigroup(&t).unwrap() && t.contains_semigroup(&s).unwrap());
        prop_assert_eq!(minimal_generators(&s).unwrap(), minimal_generators(&t).unwrap());
    }

    #[test]
    fn isomorphisms_round_trip_and_survive_an_audit(s in orthant_semigroup(), seed in any::<u64>()) {
        prop_assume!(s.minimal_generators().unwrap().len() <= 6);
        let u = unimodular(seed, s.rank());
        let t = transform(&s, &u);
        let w = are_isomorphic(&s, &t).unwrap().expect("image under a unimodular map");
        prop_assert_eq!(&w.source, &s.group());
        prop_assert_eq!(&w.target, &t.group());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = s.generators();
        for _ in 0..200 {
            let mut u = RationalVector::zero(s.rank());
            for g in gens {
                u = &u + &g.scale(rng.gen_range(0i64..=3).into());
            }
            let image = w.apply(&u).expect("elements lie in the group");
            prop_assert!(semigroup_member(&image, &t).unwrap(), "{} maps to {} outside the target", u, image);
        }
    }
}
