use num_integer::Integer;

use crate::{IntMatrix, IntVector};

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn combine(a: &IntVector, ka: i64, b: &IntVector, kb: i64) -> IntVector {
    a.iter().zip(b).map(|(x, y)| ka * x + kb * y).collect()
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `H = U · matrix`, `U` unimodular, and `H` in row
/// echelon form with positive pivots, entries above each pivot reduced into
/// `[0, pivot)`, and zero rows last. A matrix already in this form is
/// returned with `U = I`.
pub fn hermite_normal_form(matrix: &[IntVector]) -> (IntMatrix, IntMatrix) {
    let m = matrix.len();
    let n = matrix.first().map_or(0, Vec::len);
    let mut h: IntMatrix = matrix.to_vec();
    let mut u = identity(m);
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        if (r..m).all(|i| h[i][col] == 0) {
            continue;
        }
        for i in r + 1..m {
            if h[i][col] == 0 {
                continue;
            }
            if h[r][col] == 0 {
                h.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let (a, b) = (h[r][col], h[i][col]);
            if b % a == 0 {
                let q = b / a;
                h[i] = combine(&h[i], 1, &h[r], -q);
                u[i] = combine(&u[i], 1, &u[r], -q);
                continue;
            }
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (hr, hi) = (h[r].clone(), h[i].clone());
            let (ur, ui) = (u[r].clone(), u[i].clone());
            h[r] = combine(&hr, x, &hi, y);
            h[i] = combine(&hr, -b / g, &hi, a / g);
            u[r] = combine(&ur, x, &ui, y);
            u[i] = combine(&ur, -b / g, &ui, a / g);
        }
        if h[r][col] < 0 {
            h[r].iter_mut().for_each(|x| *x = -*x);
            u[r].iter_mut().for_each(|x| *x = -*x);
        }
        let p = h[r][col];
        for i in 0..r {
            let q = Integer::div_floor(&h[i][col], &p);
            if q != 0 {
                h[i] = combine(&h[i], 1, &h[r], -q);
                u[i] = combine(&u[i], 1, &u[r], -q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form.
pub fn hnf_basis(matrix: &[IntVector]) -> IntMatrix {
    let (h, _) = hermite_normal_form(matrix);
    h.into_iter().filter(|row| row.iter().any(|&x| x != 0)).collect()
}

pub fn mat_mul(a: &[IntVector], b: &[IntVector]) -> IntMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::linalg::det_int;

    #[test]
    fn identity_is_fixed() {
        let id = identity(2);
        assert_eq!(hermite_normal_form(&id), (id.clone(), id));
    }

    #[test]
    fn diagonal_already_reduced() {
        let m = vec![vec![2, 0], vec![0, 2]];
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, m);
        assert_eq!(u, identity(2));
    }

    #[test]
    fn determinant_is_preserved_up_to_sign() {
        let m = vec![vec![1, 2], vec![3, 4]];
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(mat_mul(&u, &m), h);
        assert_eq!(det_int(&u).abs(), 1);
        assert_eq!(det_int(&h).abs(), 2);
        assert_eq!(h, vec![vec![1, 0], vec![0, 2]]);
    }

    #[test]
    fn rank_deficient_rows_go_last() {
        let m = vec![vec![2, 4], vec![1, 2], vec![3, 6]];
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, vec![vec![1, 2], vec![0, 0], vec![0, 0]]);
        assert_eq!(mat_mul(&u, &m), h);
        assert_eq!(det_int(&u).abs(), 1);
    }
}
