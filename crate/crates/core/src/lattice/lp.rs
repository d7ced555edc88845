//! Exact feasibility of `A x = b, x >= 0` by phase-one simplex with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn big(q: &crate::Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// Returns a nonnegative solution of `a x = b` if one exists.
pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // Tableau columns: n structural, m artificial, then the right-hand side.
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r: Vec<BigRational> = Vec::with_capacity(width);
        for x in row {
            r.push(if flip { -x.clone() } else { x.clone() });
        }
        for k in 0..m {
            r.push(if k == i { BigRational::one() } else { BigRational::zero() });
        }
        r.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost: Vec<BigRational> = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                cost[j] -= &row[j];
            }
        }
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else {
            // Unbounded direction cannot occur for a bounded-below phase one.
            break;
        };
        let piv = t[p][enter].clone();
        for x in t[p].iter_mut() {
            *x /= &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for j in 0..width {
                    row[j] -= &f * &prow[j];
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for j in 0..width {
                cost[j] -= &f * &prow[j];
            }
        }
        basis[p] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn detects_feasible_and_infeasible_systems() {
        // x + y = 1, x - y = 0
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let x = feasible(&a, &[q(1), q(0)]).unwrap();
        assert_eq!(x, vec![BigRational::new(1.into(), 2.into()); 2]);
        // x + y = -1 has no nonnegative solution
        assert!(feasible(&[vec![q(1), q(1)]], &[q(-1)]).is_none());
    }

    #[test]
    fn solution_satisfies_the_system() {
        let a = vec![vec![q(2), q(0), q(1)], vec![q(1), q(3), q(2)]];
        let b = vec![q(3), q(7)];
        let x = feasible(&a, &b).unwrap();
        for (row, bi) in a.iter().zip(&b) {
            let s: BigRational = row.iter().zip(&x).map(|(u, v)| u * v).sum();
            assert_eq!(&s, bi);
        }
        assert!(x.iter().all(|v| !v.is_negative()));
    }
}
