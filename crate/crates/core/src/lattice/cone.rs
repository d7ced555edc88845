use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use super::linalg::{kernel_vector, nullspace_int, rank_int};
use super::vector::{int_dot, primitive, RationalVector};
use crate::error::{Error, Result};
use crate::{IntVector, Q};

/// A rational polyhedral cone in `R^d`, held in canonical form.
///
/// `generators` lists a canonical basis of the lineality space together with
/// its negation, followed by the extreme rays of the pointed part (taken in the
/// orthogonal complement of the lineality space). All vectors are primitive
/// integer vectors and the list is sorted. For a strictly convex cone this is
/// exactly the set of extreme rays. `normals` is the same canonical data for the
/// dual cone, i.e. the facet inequalities.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    rank: usize,
    generators: Vec<IntVector>,
    normals: Vec<IntVector>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Canonical generators of `{w : <a, w> >= 0 for every row a}`.
///
/// The lineality space is the kernel of the rows. Extreme rays of the pointed
/// part are the feasible solutions of `r - 1` independent tight rows together
/// with orthogonality to the lineality space, where `r` is the rank of the rows.
pub(crate) fn rays_of_inequalities(d: usize, rows: &[IntVector]) -> Vec<IntVector> {
    let rows: Vec<IntVector> =
        rows.iter().filter(|r| r.iter().any(|&x| x != 0)).map(|r| primitive(r)).collect::<BTreeSet<_>>().into_iter().collect();
    let lineality = nullspace_int(&rows, d);
    let mut out: BTreeSet<IntVector> = BTreeSet::new();
    for l in &lineality {
        out.insert(l.clone());
        out.insert(l.iter().map(|x| -x).collect());
    }
    let r = d - lineality.len();
    if r > 0 {
        for subset in combinations(rows.len(), r - 1) {
            let mut system: Vec<IntVector> = lineality.clone();
            system.extend(subset.iter().map(|&i| rows[i].clone()));
            let w = kernel_vector(&system, d);
            if w.iter().all(|&x| x == 0) {
                continue;
            }
            for cand in [w.clone(), w.iter().map(|x| -x).collect()] {
                if rows.iter().all(|a| int_dot(a, &cand) >= 0) {
                    out.insert(cand);
                }
            }
        }
    }
    out.into_iter().collect()
}

impl Cone {
    /// Cone spanned by integer generators (zero vectors are ignored).
    pub fn from_int_generators(rank: usize, generators: &[IntVector]) -> Result<Self> {
        for g in generators {
            if g.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: g.len() });
            }
        }
        let normals = rays_of_inequalities(rank, generators);
        let generators = rays_of_inequalities(rank, &normals);
        Ok(Self { rank, generators, normals })
    }

    /// Cone spanned by rational generators.
    pub fn new(rank: usize, generators: &[RationalVector]) -> Result<Self> {
        let ints: Vec<IntVector> = generators
            .iter()
            .map(|g| {
                if g.rank() != rank {
                    Err(Error::RankMismatch { expected: rank, found: g.rank() })
                } else {
                    Ok(g.primitive_direction())
                }
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Self::from_int_generators(rank, &ints)
    }

    /// `{w : <a, w> >= 0}` for every given normal `a`.
    pub fn from_inequalities(rank: usize, normals: &[IntVector]) -> Result<Self> {
        for a in normals {
            if a.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: a.len() });
            }
        }
        let generators = rays_of_inequalities(rank, normals);
        let normals = rays_of_inequalities(rank, &generators);
        Ok(Self { rank, generators, normals })
    }

    /// The nonnegative orthant `R^d_{>=0}`.
    pub fn orthant(rank: usize) -> Self {
        let mut unit: Vec<IntVector> = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        unit.sort();
        Self { rank, generators: unit.clone(), normals: unit }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Canonical generators of the dual cone (inner facet normals).
    pub fn normals(&self) -> &[IntVector] {
        &self.normals
    }

    pub fn generator_vectors(&self) -> Vec<RationalVector> {
        self.generators.iter().map(|g| RationalVector::from_ints(g)).collect()
    }

    pub fn dual(&self) -> Cone {
        Cone { rank: self.rank, generators: self.normals.clone(), normals: self.generators.clone() }
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        rank_int(&self.generators, self.rank)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    fn is_lineality(gens: &[IntVector], v: &IntVector) -> bool {
        let neg: IntVector = v.iter().map(|x| -x).collect();
        gens.binary_search(&neg).is_ok()
    }

    /// Extreme rays of the dual that are not in its lineality space; these are
    /// the facet normals of the cone inside its own span.
    pub fn facet_normals(&self) -> Vec<IntVector> {
        self.normals.iter().filter(|n| !Self::is_lineality(&self.normals, n)).cloned().collect()
    }

    pub fn contains(&self, v: &RationalVector, strict: bool) -> bool {
        assert_eq!(v.rank(), self.rank, "rank mismatch in cone membership");
        for n in &self.normals {
            let val = RationalVector::from_ints(n).dot(v);
            if val.is_negative() {
                return false;
            }
            if strict && val.is_zero() && !Self::is_lineality(&self.normals, n) {
                return false;
            }
        }
        true
    }

    pub fn contains_int(&self, v: &[i64], strict: bool) -> bool {
        for n in &self.normals {
            let val = int_dot(n, v);
            if val < 0 || (strict && val == 0 && !Self::is_lineality(&self.normals, n)) {
                return false;
            }
        }
        true
    }

    /// A point of the relative interior.
    pub fn interior_point(&self) -> IntVector {
        let mut p = vec![0; self.rank];
        for g in &self.generators {
            for (x, y) in p.iter_mut().zip(g) {
                *x += y;
            }
        }
        p
    }

    /// `c ∩ (-c) = {0}`, decided by testing the negation of every generator.
    pub fn is_strictly_convex(&self) -> bool {
        self.generators.iter().all(|g| {
            let neg: IntVector = g.iter().map(|x| -x).collect();
            !self.contains_int(&neg, false)
        })
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators.iter().all(|g| self.contains_int(g, false))
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        let mut normals = self.normals.clone();
        normals.extend(other.normals.iter().cloned());
        Cone::from_inequalities(self.rank, &normals).expect("ranks agree")
    }

    /// Every face of the cone, including the cone itself and its minimal face.
    pub fn faces(&self) -> Vec<Cone> {
        let facets = self.facet_normals();
        assert!(facets.len() <= 20, "too many facets for face enumeration");
        let mut seen: BTreeSet<Vec<IntVector>> = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u32..(1 << facets.len()) {
            let gens: Vec<IntVector> = self
                .generators
                .iter()
                .filter(|g| facets.iter().enumerate().all(|(i, f)| mask & (1 << i) == 0 || int_dot(f, g) == 0))
                .cloned()
                .collect();
            let face = Cone::from_int_generators(self.rank, &gens).expect("ranks agree");
            if seen.insert(face.generators.clone()) {
                out.push(face);
            }
        }
        out
    }

    /// True when `face` is a face of `self`: it is contained in the cone and
    /// equals the smallest face containing its relative interior point.
    pub fn has_face(&self, face: &Cone) -> bool {
        if !self.contains_cone(face) {
            return false;
        }
        let p = face.interior_point();
        let tight: Vec<IntVector> = self.facet_normals().into_iter().filter(|f| int_dot(f, &p) == 0).collect();
        let gens: Vec<IntVector> =
            self.generators.iter().filter(|g| tight.iter().all(|f| int_dot(f, g) == 0)).cloned().collect();
        Cone::from_int_generators(self.rank, &gens).expect("ranks agree") == *face
    }
}

/// Dual cone `{w : <w, u> >= 0 for all u in c}`.
pub fn dual_cone(c: &Cone) -> Cone {
    c.dual()
}

pub fn cone_contains(c: &Cone, v: &RationalVector, strict: bool) -> bool {
    c.contains(v, strict)
}

pub fn is_strictly_convex(c: &Cone) -> bool {
    c.is_strictly_convex()
}

/// Ratio helper used by callers that need `<n, v>` for an integer normal.
pub fn pairing(n: &[i64], v: &RationalVector) -> Q {
    RationalVector::from_ints(n).dot(v)
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{:?}", self.generators)
    }
}
