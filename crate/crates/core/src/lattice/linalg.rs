//! Small exact linear algebra helpers over `i64` and `Q`.

use num_traits::{One, Zero};

use super::vector::primitive;
use crate::{IntVector, Q};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Q>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / m[r][c];
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for k in 0..ncols {
                    let t = m[r][k] * f;
                    m[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn to_q(rows: &[IntVector]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect()
}

/// Clears denominators of a rational row and makes it primitive.
pub fn primitive_of_q(row: &[Q]) -> IntVector {
    let l = row.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
    let ints: Vec<i64> = row.iter().map(|x| (x * Q::from_integer(l)).to_integer()).collect();
    primitive(&ints)
}

pub fn rank_int(rows: &[IntVector], ncols: usize) -> usize {
    rref(&to_q(rows), ncols).0.len()
}

/// Canonical basis of the rational kernel `{x : rows·x = 0}`: the reduced row
/// echelon form of any kernel basis, each row scaled to a primitive integer
/// vector. Two matrices with the same kernel give the same output.
pub fn nullspace_int(rows: &[IntVector], ncols: usize) -> Vec<IntVector> {
    let (r, pivots) = rref(&to_q(rows), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<Q>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f];
            }
            v
        })
        .collect();
    let (canon, _) = rref(&basis, ncols);
    canon.iter().map(|row| primitive_of_q(row)).collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det_int(rows: &[IntVector]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Generator of the kernel of a `(d-1) x d` integer matrix via signed maximal
/// minors. Zero when the rows are dependent.
pub fn kernel_vector(rows: &[IntVector], d: usize) -> IntVector {
    debug_assert_eq!(rows.len() + 1, d);
    let mut w = Vec::with_capacity(d);
    for skip in 0..d {
        let minor: Vec<IntVector> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &x)| x).collect())
            .collect();
        let det = det_int(&minor);
        let det = if skip % 2 == 0 { det } else { -det };
        w.push(i64::try_from(det).expect("minor overflows i64"));
    }
    primitive(&w)
}

/// Solves `x · rows = target` over `Q` when the rows are linearly independent.
pub fn solve_left(rows: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let k = rows.len();
    let d = target.len();
    // Columns of the augmented system are the rows, so transpose.
    let aug: Vec<Vec<Q>> = (0..d)
        .map(|j| {
            let mut r: Vec<Q> = rows.iter().map(|row| row[j]).collect();
            r.push(target[j]);
            r
        })
        .collect();
    let (red, pivots) = rref(&aug, k + 1);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    Some(red.iter().take(k).map(|r| r[k]).collect())
}
