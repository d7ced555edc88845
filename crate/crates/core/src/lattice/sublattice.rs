use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::hnf::hnf_basis;
use super::linalg::det_int;
use super::vector::RationalVector;
use crate::error::{Error, Result};
use crate::{IntVector, Q};

/// A finitely generated subgroup of `Q^d`, stored by its rational Hermite basis.
///
/// The basis is `H / s` where `H` is the Hermite normal form of the generators
/// scaled by a common denominator `s`. Scaling commutes with the normal form, so
/// the stored basis does not depend on `s` or on the generating set, and lattice
/// equality is basis equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: Vec<RationalVector>,
}

fn common_denominator<'a>(vs: impl IntoIterator<Item = &'a RationalVector>) -> i64 {
    vs.into_iter().fold(1, |acc, v| acc.lcm(&v.denominator()))
}

impl Sublattice {
    pub fn from_generators(ambient_rank: usize, generators: &[RationalVector]) -> Result<Self> {
        for g in generators {
            if g.rank() != ambient_rank {
                return Err(Error::RankMismatch { expected: ambient_rank, found: g.rank() });
            }
        }
        let s = common_denominator(generators);
        let ints: Vec<IntVector> = generators.iter().map(|g| g.to_scaled_ints(s).expect("scaled")).collect();
        let basis = if ints.is_empty() {
            Vec::new()
        } else {
            hnf_basis(&ints).iter().map(|row| RationalVector::from_scaled(row, s)).collect()
        };
        Ok(Self { ambient_rank, basis })
    }

    /// The standard lattice `Z^d`.
    pub fn standard(d: usize) -> Self {
        Self { ambient_rank: d, basis: (0..d).map(|i| RationalVector::unit(d, i)).collect() }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Rank of the lattice (number of basis vectors).
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RationalVector] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    /// `self + Z v`.
    pub fn extend(&self, v: &RationalVector) -> Result<Self> {
        let mut gens = self.basis.clone();
        gens.push(v.clone());
        Self::from_generators(self.ambient_rank, &gens)
    }

    /// Integer coordinates of `v` in the stored basis, if `v` is in the lattice.
    pub fn coordinates(&self, v: &RationalVector) -> Option<Vec<i64>> {
        if v.rank() != self.ambient_rank {
            return None;
        }
        let s = common_denominator(self.basis.iter().chain(std::iter::once(v)));
        let rows: Vec<IntVector> = self.basis.iter().map(|b| b.to_scaled_ints(s).expect("scaled")).collect();
        let mut r = v.to_scaled_ints(s).expect("scaled");
        let mut coeffs = Vec::with_capacity(rows.len());
        for row in &rows {
            let p = row.iter().position(|&x| x != 0).expect("basis rows are nonzero");
            if r[p] % row[p] != 0 {
                return None;
            }
            let k = r[p] / row[p];
            for (x, y) in r.iter_mut().zip(row) {
                *x -= k * y;
            }
            coeffs.push(k);
        }
        r.iter().all(|&x| x == 0).then_some(coeffs)
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// `sum coords[i] * basis[i]`.
    pub fn from_coordinates(&self, coords: &[i64]) -> RationalVector {
        coords
            .iter()
            .zip(&self.basis)
            .fold(RationalVector::zero(self.ambient_rank), |acc, (&c, b)| &acc + &b.scale(Q::from_integer(c)))
    }

    /// Covolume of a full-rank lattice, `|det B|`.
    pub fn determinant(&self) -> Q {
        assert!(self.is_full_rank(), "determinant of a lattice that is not full rank");
        self.basis.iter().enumerate().fold(Q::from_integer(1), |acc, (i, b)| acc * b.coords()[i].abs())
    }

    /// True when `n` pairs integrally with every element.
    pub fn dual_contains(&self, n: &RationalVector) -> bool {
        self.basis.iter().all(|b| b.dot(n).is_integer())
    }

    /// The primitive element of the dual lattice on the ray spanned by `ray`.
    ///
    /// The dual points on the ray are `t·ray` with `t·<ray, b>` integral for every
    /// basis vector `b`; the least such `t` is the inverse of the rational gcd of
    /// the pairings.
    pub fn primitive_dual_on_ray(&self, ray: &RationalVector) -> Result<RationalVector> {
        let pairings: Vec<Q> = self.basis.iter().map(|b| b.dot(ray)).collect();
        let den = pairings.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let g = pairings.iter().fold(0i64, |acc, q| acc.gcd(&(q * Q::from_integer(den)).to_integer()));
        if g == 0 {
            return Err(Error::InvalidArgument(format!("ray {ray} is orthogonal to the lattice")));
        }
        Ok(ray.scale(Q::new(den, g)))
    }
}

/// Index `[sup : sub]`.
///
/// Both lattices must have the same rank and `sub` must be contained in `sup`.
/// The index is `|det C|` where `C` expresses the basis of `sub` in the basis of
/// `sup`, which also handles lattices that are not full rank in the ambient space.
pub fn lattice_index(sub: &Sublattice, sup: &Sublattice) -> Result<u64> {
    if sub.ambient_rank != sup.ambient_rank {
        return Err(Error::RankMismatch { expected: sup.ambient_rank, found: sub.ambient_rank });
    }
    if sub.rank() != sup.rank() {
        return Err(Error::RankMismatch { expected: sup.rank(), found: sub.rank() });
    }
    let coords: Vec<IntVector> =
        sub.basis.iter().map(|b| sup.coordinates(b).ok_or(Error::NotASublattice)).collect::<Result<_>>()?;
    let det = det_int(&coords);
    debug_assert!(!det.is_zero());
    Ok(det.unsigned_abs() as u64)
}

/// Membership of `v` in `lattice`; false on rank mismatch.
pub fn lattice_member(v: &RationalVector, lattice: &Sublattice) -> bool {
    lattice.contains(v)
}
