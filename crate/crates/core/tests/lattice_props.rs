use proptest::prelude::*;

use qo_toric::lattice::{hermite_normal_form, hnf_basis, lattice_index, lattice_member};
use qo_toric::{Cone, IntVector, RationalVector, Sublattice};

fn int_rows(d: usize, k: std::ops::RangeInclusive<usize>, range: i64) -> impl Strategy<Value = Vec<IntVector>> {
    proptest::collection::vec(proptest::collection::vec(-range..=range, d), k)
}

fn rational(range: i64) -> impl Strategy<Value = RationalVector> {
    (proptest::collection::vec(-range..=range, 1..=3), 1i64..=4)
        .prop_map(|(c, den)| RationalVector::from_scaled(&c, den))
}

proptest! {
    #[test]
    fn dual_of_dual_is_identity(d in 2usize..=3, rows in proptest::collection::vec(proptest::collection::vec(0i64..=4, 3), 2..=5)) {
        let gens: Vec<IntVector> = rows.into_iter().map(|r| r[..d].to_vec()).filter(|r| r.iter().any(|&x| x != 0)).collect();
        prop_assume!(!gens.is_empty());
        let c = Cone::from_int_generators(d, &gens).unwrap();
        prop_assume!(c.is_full_dimensional() && c.is_strictly_convex());
        prop_assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn index_is_multiplicative_along_chains(d in 1usize..=3, v1 in rational(5), v2 in rational(5)) {
        let pad = |v: &RationalVector| {
            let mut c = v.coords().to_vec();
            c.resize(d, 0.into());
            RationalVector::new(c)
        };
        let m0 = Sublattice::standard(d);
        let m1 = m0.extend(&pad(&v1)).unwrap();
        let m2 = m1.extend(&pad(&v2)).unwrap();
        let total = lattice_index(&m0, &m2).unwrap();
        prop_assert_eq!(total, lattice_index(&m1, &m2).unwrap() * lattice_index(&m0, &m1).unwrap());
    }

    #[test]
    fn membership_agrees_with_enumeration(
        d in 1usize..=3,
        rows in int_rows(3, 1..=3, 3),
        scale in 1i64..=3,
        coeffs in proptest::collection::vec(-3i64..=3, 3),
        k in 1i64..=3,
    ) {
        let basis: Vec<IntVector> = rows.iter().map(|r| r[..d].to_vec()).collect();
        let r = basis.len();
        prop_assume!(r <= d && qo_toric::lattice::det_int(&gram(&basis)) != 0);
        let gens: Vec<RationalVector> = basis.iter().map(|b| RationalVector::from_scaled(b, scale)).collect();
        let lattice = Sublattice::from_generators(d, &gens).unwrap();
        // v = (sum c_i g_i) / k: its unique coordinates are c / k, inside the box.
        let combo: IntVector = (0..d).map(|j| (0..r).map(|i| coeffs[i] * basis[i][j]).sum()).collect();
        let v = RationalVector::from_scaled(&combo, scale * k);
        let found = box_points(r, 3).any(|c| {
            let w: IntVector = (0..d).map(|j| (0..r).map(|i| c[i] * basis[i][j]).sum::<i64>() * k).collect();
            w == combo
        });
        prop_assert_eq!(lattice_member(&v, &lattice), found);
    }

    #[test]
    fn hnf_is_idempotent(rows in int_rows(3, 1..=4, 6)) {
        let h = hnf_basis(&rows);
        prop_assert_eq!(hnf_basis(&h), h.clone());
        let (full, _) = hermite_normal_form(&rows);
        prop_assert_eq!(hermite_normal_form(&full).0, full);
    }
}

/// Gram matrix, nonsingular exactly when the rows are independent.
fn gram(rows: &[IntVector]) -> Vec<IntVector> {
    rows.iter().map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
}

fn box_points(r: usize, bound: i64) -> impl Iterator<Item = IntVector> {
    let side = (2 * bound + 1) as usize;
    (0..side.pow(r as u32)).map(move |mut idx| {
        (0..r)
            .map(|_| {
                let c = (idx % side) as i64 - bound;
                idx /= side;
                c
            })
            .collect()
    })
}
