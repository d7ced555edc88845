//! Integral polyhedra `conv(I) + C`, their faces, the dual Newton diagram and
//! the exceptional edges of the associated normalized blow-up.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::lattice::lp::{big, feasible};
use crate::lattice::{int_dot, Cone, RationalVector};
use crate::{IntVector, Q};

/// The polyhedron `conv(∪_{a∈I} a + recession)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralPolyhedron {
    points: Vec<RationalVector>,
    recession: Cone,
    vertices: Vec<RationalVector>,
}

impl IntegralPolyhedron {
    pub fn points(&self) -> &[RationalVector] {
        &self.points
    }

    pub fn recession(&self) -> &Cone {
        &self.recession
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn rank(&self) -> usize {
        self.recession.rank()
    }

    /// Minimum of `<eta, ·>` over the generating points.
    pub fn min_value(&self, eta: &RationalVector) -> Q {
        self.points.iter().map(|p| eta.dot(p)).min().expect("nonempty support")
    }

    /// Whether `eta` defines a compact face (it lies in the interior of the
    /// dual of the recession cone).
    pub fn is_compact_direction(&self, eta: &RationalVector) -> bool {
        self.recession.dual().contains(eta, true)
    }

    /// The inner normal cone of a vertex: weights in the dual of the recession
    /// cone that are minimized at `v`.
    pub fn normal_cone(&self, v: &RationalVector) -> Cone {
        let mut normals: Vec<IntVector> = self.recession.generators().to_vec();
        normals.extend(self.vertices.iter().filter_map(|q| (q - v).primitive_direction()));
        Cone::from_inequalities(self.rank(), &normals).expect("ranks agree")
    }

    /// Exact membership of a point in the polyhedron.
    pub fn contains(&self, point: &RationalVector) -> bool {
        let vertices: Vec<&RationalVector> = self.vertices.iter().collect();
        self.vertices.contains(point) || in_hull_plus_cone(point, &vertices, &self.recession)
    }

    /// A weight in the interior of the dual of the recession cone whose face is
    /// exactly `{v}`, when `v` is a vertex.
    pub fn vertex_witness(&self, v: &RationalVector) -> Option<RationalVector> {
        if !self.vertices.contains(v) {
            return None;
        }
        let eta = RationalVector::from_ints(&self.normal_cone(v).interior_point());
        let face = face_of(self, &eta).ok()?;
        (face == [v.clone()] && self.is_compact_direction(&eta)).then_some(eta)
    }
}

/// Exact test of `p ∈ conv(others) + recession`.
fn in_hull_plus_cone(p: &RationalVector, others: &[&RationalVector], recession: &Cone) -> bool {
    if others.is_empty() {
        return false;
    }
    let d = p.rank();
    let ncols = others.len() + recession.generators().len();
    let mut rows: Vec<Vec<BigRational>> = vec![Vec::with_capacity(ncols); d + 1];
    for q in others {
        for (k, row) in rows.iter_mut().take(d).enumerate() {
            row.push(big(&q.coords()[k]));
        }
        rows[d].push(BigRational::from_integer(BigInt::from(1)));
    }
    for r in recession.generators() {
        for (k, row) in rows.iter_mut().take(d).enumerate() {
            row.push(BigRational::from_integer(BigInt::from(r[k])));
        }
        rows[d].push(BigRational::from_integer(BigInt::from(0)));
    }
    let mut rhs: Vec<BigRational> = p.coords().iter().map(big).collect();
    rhs.push(BigRational::from_integer(BigInt::from(1)));
    feasible(&rows, &rhs).is_some()
}

/// Builds the polyhedron and extracts its vertices: `p ∈ I` is a vertex iff it
/// is not in `conv(I \ {p}) + recession`.
pub fn polyhedron_from_support(points: &[RationalVector], recession: &Cone) -> Result<IntegralPolyhedron> {
    if points.is_empty() {
        return Err(Error::EmptySupport);
    }
    let d = recession.rank();
    for p in points {
        if p.rank() != d {
            return Err(Error::RankMismatch { expected: d, found: p.rank() });
        }
    }
    if !recession.is_strictly_convex() {
        return Err(Error::InvalidArgument("recession cone must be strictly convex".into()));
    }
    let points: Vec<RationalVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    // Points lying in another point plus the recession cone are never vertices.
    let candidates: Vec<&RationalVector> = points
        .iter()
        .filter(|p| !points.iter().any(|q| q != *p && recession.contains(&(*p - q), false)))
        .collect();
    let vertices = candidates
        .iter()
        .filter(|p| {
            let others: Vec<&RationalVector> = candidates.iter().copied().filter(|q| q != *p).collect();
            !in_hull_plus_cone(p, &others, recession)
        })
        .map(|p| (*p).clone())
        .collect();
    Ok(IntegralPolyhedron { points, recession: recession.clone(), vertices })
}

/// The generating points on the face where `<eta, ·>` is minimal.
pub fn face_of(p: &IntegralPolyhedron, eta: &RationalVector) -> Result<Vec<RationalVector>> {
    if eta.rank() != p.rank() {
        return Err(Error::RankMismatch { expected: p.rank(), found: eta.rank() });
    }
    if !p.recession.dual().contains(eta, false) {
        return Err(Error::UnboundedDirection(eta.to_string()));
    }
    let min = p.min_value(eta);
    Ok(p.points.iter().filter(|q| eta.dot(q) == min).cloned().collect())
}

/// A fan: a face-closed family of strictly convex cones meeting along common
/// faces, together with the cone it subdivides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    cones: Vec<Cone>,
    support: Cone,
}

impl Fan {
    /// Collects the given cones and all their faces, then validates the result.
    pub fn from_cones(cones: &[Cone], support: &Cone) -> Result<Self> {
        let mut all: Vec<Cone> = Vec::new();
        let mut seen: HashSet<Cone> = HashSet::new();
        for c in cones {
            for f in c.faces() {
                if seen.insert(f.clone()) {
                    all.push(f);
                }
            }
        }
        all.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.generators().cmp(b.generators())));
        let fan = Fan { cones: all, support: support.clone() };
        fan.validate()?;
        Ok(fan)
    }

    /// The fan of faces of a single cone.
    pub fn of_cone(c: &Cone) -> Result<Self> {
        Self::from_cones(std::slice::from_ref(c), c)
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn support(&self) -> &Cone {
        &self.support
    }

    pub fn maximal_cones(&self) -> Vec<&Cone> {
        let d = self.support.dim();
        self.cones.iter().filter(|c| c.dim() == d).collect()
    }

    /// One-dimensional cones, as primitive integer rays.
    pub fn rays(&self) -> Vec<IntVector> {
        self.cones.iter().filter(|c| c.dim() == 1).map(|c| c.generators()[0].clone()).collect()
    }

    /// Checks the fan axioms and that the cones subdivide the support.
    ///
    /// Covering is checked through the facets of the maximal cones: each one is
    /// either on the boundary of the support or shared by exactly two maximal
    /// cones.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidArgument(format!("invalid fan: {msg}")));
        let set: HashSet<&Cone> = self.cones.iter().collect();
        for c in &self.cones {
            if !c.is_strictly_convex() {
                return fail(format!("{c:?} is not strictly convex"));
            }
            if !self.support.contains_cone(c) {
                return fail(format!("{c:?} is outside the support"));
            }
            for f in c.faces() {
                if !set.contains(&f) {
                    return fail(format!("face {f:?} of {c:?} is missing"));
                }
            }
        }
        for (i, a) in self.cones.iter().enumerate() {
            for b in &self.cones[i + 1..] {
                let meet = a.intersection(b);
                if !a.has_face(&meet) || !b.has_face(&meet) {
                    return fail(format!("{a:?} and {b:?} do not meet along a common face"));
                }
            }
        }
        let maximal = self.maximal_cones();
        if maximal.is_empty() {
            return fail("no maximal cones".into());
        }
        let boundary = self.support.facet_normals();
        let d = self.support.dim();
        for m in &maximal {
            for facet in m.faces().into_iter().filter(|f| f.dim() + 1 == d) {
                let on_boundary =
                    boundary.iter().any(|n| facet.generators().iter().all(|g| int_dot(n, g) == 0));
                let shared = maximal.iter().filter(|o| o.has_face(&facet)).count();
                if !(on_boundary && shared == 1 || !on_boundary && shared == 2) {
                    return fail(format!("facet {facet:?} is covered {shared} times"));
                }
            }
        }
        Ok(())
    }
}

/// The subdivision of `sigma` by the normal cones of the faces of `p`.
///
/// The maximal cones are the normal cones of the vertices; every other cone is
/// a face of one of them.
pub fn dual_newton_diagram(p: &IntegralPolyhedron, sigma: &Cone) -> Result<Fan> {
    if !sigma.is_strictly_convex() || !sigma.is_full_dimensional() {
        return Err(Error::InvalidArgument("sigma must be strictly convex and full-dimensional".into()));
    }
    if p.recession != sigma.dual() {
        return Err(Error::InvalidArgument("recession cone of the polyhedron must be the dual of sigma".into()));
    }
    let normal_cones: Vec<Cone> = p.vertices.iter().map(|v| p.normal_cone(v)).collect();
    Fan::from_cones(&normal_cones, sigma)
}

/// Primitive generators of the edges of `fan` whose relative interior lies in
/// the interior of `sigma`; these index the exceptional divisors.
pub fn exceptional_edges(fan: &Fan, sigma: &Cone) -> Vec<RationalVector> {
    fan.rays()
        .into_iter()
        .filter(|r| sigma.contains_int(r, true))
        .map(|r| RationalVector::from_ints(&r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(list: &[&[i64]]) -> Vec<RationalVector> {
        list.iter().map(|p| RationalVector::from_ints(p)).collect()
    }

    fn quad() -> Cone {
        Cone::orthant(2)
    }

    #[test]
    fn vertices_of_two_incomparable_points() {
        let p = polyhedron_from_support(&pts(&[&[1, 0], &[0, 1]]), &quad()).unwrap();
        assert_eq!(p.vertices(), pts(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn dominated_point_is_not_a_vertex() {
        let p = polyhedron_from_support(&pts(&[&[1, 1], &[2, 2]]), &quad()).unwrap();
        assert_eq!(p.vertices(), pts(&[&[1, 1]]));
    }

    #[test]
    fn three_vertices() {
        let p = polyhedron_from_support(&pts(&[&[2, 0], &[1, 1], &[0, 3]]), &quad()).unwrap();
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn collinear_point_is_not_a_vertex() {
        let p = polyhedron_from_support(&pts(&[&[2, 0], &[1, 1], &[0, 2]]), &quad()).unwrap();
        assert_eq!(p.vertices(), pts(&[&[0, 2], &[2, 0]]));
    }

    #[test]
    fn empty_support_is_rejected() {
        assert_eq!(polyhedron_from_support(&[], &quad()), Err(Error::EmptySupport));
    }

    #[test]
    fn faces_by_weight() {
        let p = polyhedron_from_support(&pts(&[&[2, 1], &[1, 3]]), &quad()).unwrap();
        assert_eq!(face_of(&p, &RationalVector::from_ints(&[1, 1])).unwrap(), pts(&[&[2, 1]]));
        assert_eq!(face_of(&p, &RationalVector::from_ints(&[2, 1])).unwrap(), pts(&[&[1, 3], &[2, 1]]));
        assert!(matches!(face_of(&p, &RationalVector::from_ints(&[-1, 1])), Err(Error::UnboundedDirection(_))));
        let single = polyhedron_from_support(&pts(&[&[3, 5]]), &quad()).unwrap();
        assert_eq!(face_of(&single, &RationalVector::from_ints(&[7, 2])).unwrap(), pts(&[&[3, 5]]));
    }

    #[test]
    fn diagram_of_a_segment() {
        let p = polyhedron_from_support(&pts(&[&[1, 0], &[0, 1]]), &quad()).unwrap();
        let fan = dual_newton_diagram(&p, &quad()).unwrap();
        let max: Vec<Vec<IntVector>> = fan.maximal_cones().iter().map(|c| c.generators().to_vec()).collect();
        assert!(max.contains(&vec![vec![0, 1], vec![1, 1]]));
        assert!(max.contains(&vec![vec![1, 0], vec![1, 1]]));
        assert_eq!(exceptional_edges(&fan, &quad()), pts(&[&[1, 1]]));
    }

    #[test]
    fn diagram_of_a_point_is_trivial() {
        let p = polyhedron_from_support(&pts(&[&[4, 1]]), &quad()).unwrap();
        let fan = dual_newton_diagram(&p, &quad()).unwrap();
        assert_eq!(fan, Fan::of_cone(&quad()).unwrap());
        assert!(exceptional_edges(&fan, &quad()).is_empty());
    }

    #[test]
    fn diagram_split_by_edge_normal() {
        let p = polyhedron_from_support(&pts(&[&[2, 0], &[0, 3]]), &quad()).unwrap();
        let fan = dual_newton_diagram(&p, &quad()).unwrap();
        assert_eq!(exceptional_edges(&fan, &quad()), pts(&[&[3, 2]]));
    }

    #[test]
    fn one_dimensional_diagram_is_trivial() {
        let line = Cone::orthant(1);
        let p = polyhedron_from_support(&pts(&[&[3], &[2], &[7]]), &line).unwrap();
        assert_eq!(p.vertices(), pts(&[&[2]]));
        let fan = dual_newton_diagram(&p, &line).unwrap();
        assert_eq!(fan, Fan::of_cone(&line).unwrap());
        assert_eq!(exceptional_edges(&fan, &line), pts(&[&[1]]));
    }

    #[test]
    fn vertex_witnesses_isolate_vertices() {
        let p = polyhedron_from_support(&pts(&[&[3, 0, 0], &[0, 2, 1], &[1, 1, 1], &[0, 0, 4], &[2, 2, 2]]), &Cone::orthant(3))
            .unwrap();
        for v in p.vertices() {
            let eta = p.vertex_witness(v).expect("witness");
            assert!(eta.is_positive());
        }
    }

    #[test]
    fn three_dimensional_diagram_is_a_valid_fan() {
        let p = polyhedron_from_support(&pts(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1], &[1, 1, 0]]), &Cone::orthant(3)).unwrap();
        let fan = dual_newton_diagram(&p, &Cone::orthant(3)).unwrap();
        fan.validate().unwrap();
        for e in exceptional_edges(&fan, &Cone::orthant(3)) {
            assert!(e.is_positive());
        }
    }
}
