//! Finitely generated affine semigroups `Λ ⊂ (1/m)Z^d`.

use std::collections::{BTreeSet, HashSet};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::linalg::{rank_int, solve_left};
use crate::lattice::{det_int, int_dot, Cone, RationalVector, Sublattice};
use crate::{IntMatrix, IntVector, Q};

/// Largest group rank handled by saturation and the isomorphism search.
pub const MAX_RANK: usize = 4;

/// Default number of candidate bijections explored by [`are_isomorphic`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

const BOX_LIMIT: u64 = 5_000_000;

/// The semigroup generated by finitely many nonzero vectors of `(1/m)Z^d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSemigroup {
    rank: usize,
    m: i64,
    generators: Vec<RationalVector>,
}

impl AffineSemigroup {
    pub fn new(m: i64, generators: Vec<RationalVector>) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument(format!("denominator must be positive, got {m}")));
        }
        let Some(first) = generators.first() else {
            return Err(Error::InvalidArgument("a semigroup needs at least one generator".into()));
        };
        let rank = first.rank();
        for g in &generators {
            if g.rank() != rank {
                return Err(Error::RankMismatch { expected: rank, found: g.rank() });
            }
            if g.is_zero() {
                return Err(Error::InvalidArgument("generators must be nonzero".into()));
            }
            if g.to_scaled_ints(m).is_none() {
                return Err(Error::InvalidArgument(format!("generator {g} is not in (1/{m})Z^{rank}")));
            }
        }
        Ok(Self { rank, m, generators })
    }

    /// Semigroup generated by `v / m` for each integer vector `v`.
    pub fn from_scaled(m: i64, generators: &[IntVector]) -> Result<Self> {
        Self::new(m, generators.iter().map(|g| RationalVector::from_scaled(g, m)).collect())
    }

    /// `Z^d_{>=0}`.
    pub fn standard(d: usize) -> Self {
        Self { rank: d, m: 1, generators: (0..d).map(|i| RationalVector::unit(d, i)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn denominator(&self) -> i64 {
        self.m
    }

    pub fn generators(&self) -> &[RationalVector] {
        &self.generators
    }

    /// Generators multiplied by `m`.
    pub fn scaled_generators(&self) -> Vec<IntVector> {
        self.generators.iter().map(|g| g.to_scaled_ints(self.m).expect("checked on construction")).collect()
    }

    /// The group `Λ + (-Λ)`.
    pub fn group(&self) -> Sublattice {
        Sublattice::from_generators(self.rank, &self.generators).expect("ranks checked on construction")
    }

    /// The cone `R_{>=0} Λ`.
    pub fn cone(&self) -> Cone {
        Cone::new(self.rank, &self.generators).expect("ranks checked on construction")
    }

    pub fn has_vertex(&self) -> bool {
        self.cone().is_strictly_convex()
    }

    fn require_vertex(&self) -> Result<()> {
        if self.has_vertex() {
            Ok(())
        } else {
            Err(Error::NoVertex)
        }
    }

    /// Generators in coordinates of the group basis, with the cone they span.
    fn group_coordinates(&self) -> (Sublattice, Vec<IntVector>, Cone) {
        let group = self.group();
        let coords: Vec<IntVector> =
            self.generators.iter().map(|g| group.coordinates(g).expect("generator lies in its group")).collect();
        let cone = Cone::from_int_generators(group.rank(), &coords).expect("ranks agree");
        (group, coords, cone)
    }

    pub fn contains(&self, u: &RationalVector) -> Result<bool> {
        self.require_vertex()?;
        if u.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: u.rank() });
        }
        let (group, coords, cone) = self.group_coordinates();
        let Some(target) = group.coordinates(u) else {
            return Ok(false);
        };
        Ok(Decomposer::new(coords, &cone).member(&target))
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_semigroup(&self, other: &AffineSemigroup) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The inclusion-minimal generating set, sorted.
    pub fn minimal_generators(&self) -> Result<Vec<RationalVector>> {
        self.require_vertex()?;
        let (group, coords, cone) = self.group_coordinates();
        let mut out: Vec<RationalVector> =
            minimal_coordinates(&coords, &cone).iter().map(|c| group.from_coordinates(c)).collect();
        out.sort();
        Ok(out)
    }

    /// The same semigroup presented by its minimal generators.
    pub fn minimized(&self) -> Result<Self> {
        Ok(Self { rank: self.rank, m: self.m, generators: self.minimal_generators()? })
    }

    /// `R_{>=0}Λ ∩ (Λ + (-Λ))`, presented by its Hilbert basis.
    ///
    /// Every irreducible element of the saturation lies in the zonotope spanned by
    /// the primitive extreme rays, so candidates are the lattice points of the cone
    /// in the bounding box of that zonotope; an element is kept when no smaller
    /// candidate can be subtracted from it inside the cone.
    pub fn saturation(&self) -> Result<Self> {
        self.require_vertex()?;
        let (group, _, cone) = self.group_coordinates();
        let r = group.rank();
        if r > MAX_RANK {
            return Err(Error::DimensionTooLarge { found: r, max: MAX_RANK });
        }
        let rays = cone.generators();
        let w = positive_functional(&cone);
        let wmax: i64 = rays.iter().map(|ray| int_dot(&w, ray)).sum();
        let lo: Vec<i64> = (0..r).map(|k| rays.iter().map(|ray| ray[k].min(0)).sum()).collect();
        let hi: Vec<i64> = (0..r).map(|k| rays.iter().map(|ray| ray[k].max(0)).sum()).collect();
        let volume = lo.iter().zip(&hi).try_fold(1u64, |acc, (l, h)| acc.checked_mul((h - l + 1) as u64));
        match volume {
            Some(v) if v <= BOX_LIMIT => {}
            _ => return Err(Error::SearchBudgetExceeded { explored: volume.unwrap_or(u64::MAX) }),
        }
        let mut candidates: Vec<(i64, IntVector)> = Vec::new();
        let mut x = lo.clone();
        loop {
            let wx = int_dot(&w, &x);
            if wx > 0 && wx <= wmax && cone.contains_int(&x, false) {
                candidates.push((wx, x.clone()));
            }
            let mut k = 0;
            while k < r && x[k] == hi[k] {
                x[k] = lo[k];
                k += 1;
            }
            if k == r {
                break;
            }
            x[k] += 1;
        }
        candidates.sort();
        let mut basis: Vec<IntVector> = Vec::new();
        for (i, (wx, x)) in candidates.iter().enumerate() {
            let reducible = candidates[..i].iter().take_while(|(wc, _)| wc < wx).any(|(_, c)| {
                let diff: IntVector = x.iter().zip(c).map(|(a, b)| a - b).collect();
                cone.contains_int(&diff, false)
            });
            if !reducible {
                basis.push(x.clone());
            }
        }
        let mut generators: Vec<RationalVector> = basis.iter().map(|c| group.from_coordinates(c)).collect();
        generators.sort();
        Ok(Self { rank: self.rank, m: self.m, generators })
    }

    /// Generator weights `<n, g>`, required to be positive integers.
    fn generator_weights(&self, n: &RationalVector) -> Result<Vec<i64>> {
        if n.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: n.rank() });
        }
        self.generators
            .iter()
            .map(|g| {
                let v = g.dot(n);
                if !v.is_integer() {
                    Err(Error::NonIntegralWeight(format!("<{n}, {g}> = {}", crate::lattice::format_rational(&v))))
                } else if !v.is_positive() {
                    Err(Error::BoundaryWeight(format!("<{n}, {g}> = {v} is not positive")))
                } else {
                    Ok(v.to_integer())
                }
            })
            .collect()
    }

    /// Elements of weight `k` under `n`, for `k = 0..=max_grade`, each layer sorted.
    pub fn elements_by_weight(&self, n: &RationalVector, max_grade: u32) -> Result<Vec<Vec<RationalVector>>> {
        let weights = self.generator_weights(n)?;
        let gens = self.scaled_generators();
        let max = i64::from(max_grade);
        let mut layers: Vec<BTreeSet<IntVector>> = vec![BTreeSet::new(); max_grade as usize + 1];
        layers[0].insert(vec![0; self.rank]);
        for k in 0..=max {
            let current: Vec<IntVector> = layers[k as usize].iter().cloned().collect();
            for x in current {
                for (g, &wg) in gens.iter().zip(&weights) {
                    if k + wg <= max {
                        let y: IntVector = x.iter().zip(g).map(|(a, b)| a + b).collect();
                        layers[(k + wg) as usize].insert(y);
                    }
                }
            }
        }
        Ok(layers
            .into_iter()
            .map(|layer| layer.iter().map(|x| RationalVector::from_scaled(x, self.m)).collect())
            .collect())
    }

    /// `dim H_k = #{u ∈ Λ : <n, u> = k}` for `k = 0..=max_grade`.
    pub fn graded_dims(&self, n: &RationalVector, max_grade: u32) -> Result<Vec<u64>> {
        Ok(self.elements_by_weight(n, max_grade)?.iter().map(|l| l.len() as u64).collect())
    }
}

/// An integer vector that is positive on every nonzero point of a strictly
/// convex cone: the sum of the canonical generators of its dual.
fn positive_functional(cone: &Cone) -> IntVector {
    cone.dual().interior_point()
}

/// Decides membership in the semigroup generated by integer vectors by
/// depth-first decomposition, bounded by a functional positive on the cone.
struct Decomposer<'a> {
    gens: Vec<IntVector>,
    weights: Vec<i64>,
    w: IntVector,
    cone: &'a Cone,
    failed: HashSet<IntVector>,
}

impl<'a> Decomposer<'a> {
    /// `cone` must be strictly convex and contain every generator.
    fn new(gens: Vec<IntVector>, cone: &'a Cone) -> Self {
        let w = positive_functional(cone);
        let weights = gens.iter().map(|g| int_dot(&w, g)).collect();
        Self { gens, weights, w, cone, failed: HashSet::new() }
    }

    fn member(&mut self, t: &IntVector) -> bool {
        if t.iter().all(|&x| x == 0) {
            return true;
        }
        let wt = int_dot(&self.w, t);
        if wt <= 0 || !self.cone.contains_int(t, false) || self.failed.contains(t) {
            return false;
        }
        for i in 0..self.gens.len() {
            if self.weights[i] <= wt {
                let rest: IntVector = t.iter().zip(&self.gens[i]).map(|(a, b)| a - b).collect();
                if self.member(&rest) {
                    return true;
                }
            }
        }
        self.failed.insert(t.clone());
        false
    }
}

/// Removes duplicates and generators expressible through the others.
fn minimal_coordinates(coords: &[IntVector], cone: &Cone) -> Vec<IntVector> {
    let w = positive_functional(cone);
    let mut gens: Vec<IntVector> = coords.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    gens.sort_by_key(|g| std::cmp::Reverse(int_dot(&w, g)));
    let mut i = 0;
    while i < gens.len() {
        let others: Vec<IntVector> = gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        if Decomposer::new(others, cone).member(&gens[i]) {
            gens.remove(i);
        } else {
            i += 1;
        }
    }
    gens.sort();
    gens
}

pub fn has_vertex(s: &AffineSemigroup) -> bool {
    s.has_vertex()
}

pub fn semigroup_member(u: &RationalVector, s: &AffineSemigroup) -> Result<bool> {
    s.contains(u)
}

pub fn minimal_generators(s: &AffineSemigroup) -> Result<Vec<RationalVector>> {
    s.minimal_generators()
}

pub fn saturation(s: &AffineSemigroup) -> Result<AffineSemigroup> {
    s.saturation()
}

pub fn graded_dims(s: &AffineSemigroup, n: &RationalVector, max_grade: u32) -> Result<Vec<u64>> {
    s.graded_dims(n, max_grade)
}

/// A group isomorphism carrying one semigroup onto another.
///
/// `matrix` acts on column vectors of coordinates: if `x` are the coordinates of
/// `u` in the source group basis, `matrix · x` are the coordinates of the image
/// in the target group basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemigroupIsomorphism {
    pub matrix: IntMatrix,
    pub source: Sublattice,
    pub target: Sublattice,
}

impl SemigroupIsomorphism {
    /// Image of `u`; `None` when `u` is not in the source group.
    pub fn apply(&self, u: &RationalVector) -> Option<RationalVector> {
        let x = self.source.coordinates(u)?;
        let y: IntVector = self.matrix.iter().map(|row| int_dot(row, &x)).collect();
        Some(self.target.from_coordinates(&y))
    }
}

/// Isomorphism invariant of each generator: how many facets of the cone it lies
/// on, and how many generators `h` make `g + h` decomposable without `g` and `h`.
fn fingerprints(gens: &[IntVector], cone: &Cone) -> Vec<(usize, usize)> {
    let facets = cone.facet_normals();
    let k = gens.len();
    let mut pair = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i..k {
            let rest: Vec<IntVector> =
                gens.iter().enumerate().filter(|(l, _)| *l != i && *l != j).map(|(_, g)| g.clone()).collect();
            let sum: IntVector = gens[i].iter().zip(&gens[j]).map(|(a, b)| a + b).collect();
            let hit = Decomposer::new(rest, cone).member(&sum);
            pair[i][j] = hit;
            pair[j][i] = hit;
        }
    }
    (0..k)
        .map(|i| {
            let on = facets.iter().filter(|f| int_dot(f, &gens[i]) == 0).count();
            (on, pair[i].iter().filter(|&&b| b).count())
        })
        .collect()
}

/// Indices of a maximal linearly independent subset, chosen greedily.
fn independent_subset(gens: &[IntVector], r: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<IntVector> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        rows.push(g.clone());
        if rank_int(&rows, r) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}

/// The integer matrix `W` with `W · a_s = b_s`, if it exists and is unimodular.
fn solve_unimodular(a: &[IntVector], b: &[IntVector]) -> Option<IntMatrix> {
    let r = a.len();
    let columns: Vec<Vec<Q>> = (0..r).map(|k| a.iter().map(|v| Q::from_integer(v[k])).collect()).collect();
    let mut w = Vec::with_capacity(r);
    for i in 0..r {
        let target: Vec<Q> = b.iter().map(|v| Q::from_integer(v[i])).collect();
        let row = solve_left(&columns, &target)?;
        if row.iter().any(|x| !x.is_integer()) {
            return None;
        }
        w.push(row.iter().map(Q::to_integer).collect::<IntVector>());
    }
    (det_int(&w).abs() == 1).then_some(w)
}

/// Decides whether two vertex semigroups are isomorphic.
pub fn are_isomorphic(a: &AffineSemigroup, b: &AffineSemigroup) -> Result<Option<SemigroupIsomorphism>> {
    are_isomorphic_with_budget(a, b, DEFAULT_SEARCH_BUDGET)
}

/// [`are_isomorphic`] with an explicit bound on the number of candidate maps.
///
/// An isomorphism of vertex semigroups permutes minimal generators, so it is
/// determined by the images of a linearly independent subset of them. Those
/// images are tried in lexicographic order among target generators with the
/// same fingerprint; each candidate map is accepted when it is integral,
/// unimodular and carries the minimal generators onto the target's.
pub fn are_isomorphic_with_budget(
    a: &AffineSemigroup,
    b: &AffineSemigroup,
    budget: u64,
) -> Result<Option<SemigroupIsomorphism>> {
    a.require_vertex()?;
    b.require_vertex()?;
    let (ga, _, cone_a) = a.group_coordinates();
    let (gb, _, cone_b) = b.group_coordinates();
    let r = ga.rank();
    if r > MAX_RANK {
        return Err(Error::DimensionTooLarge { found: r, max: MAX_RANK });
    }
    let ma: Vec<IntVector> = a.minimal_generators()?.iter().map(|g| ga.coordinates(g).expect("in group")).collect();
    let mb: Vec<IntVector> = b.minimal_generators()?.iter().map(|g| gb.coordinates(g).expect("in group")).collect();
    if ma.len() != mb.len() || r != gb.rank() || cone_a.facet_normals().len() != cone_b.facet_normals().len() {
        return Ok(None);
    }
    let fa = fingerprints(&ma, &cone_a);
    let fb = fingerprints(&mb, &cone_b);
    let mut sorted_a = fa.clone();
    let mut sorted_b = fb.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(None);
    }
    let targets: HashSet<&IntVector> = mb.iter().collect();
    let basis = independent_subset(&ma, r);
    let source: Vec<IntVector> = basis.iter().map(|&i| ma[i].clone()).collect();
    let mut explored = 0u64;
    let mut images: Vec<usize> = Vec::with_capacity(r);

    fn search(
        depth: usize,
        images: &mut Vec<usize>,
        ctx: &SearchContext<'_>,
        explored: &mut u64,
    ) -> Result<Option<IntMatrix>> {
        if depth == ctx.basis.len() {
            *explored += 1;
            if *explored > ctx.budget {
                return Err(Error::SearchBudgetExceeded { explored: *explored - 1 });
            }
            let image: Vec<IntVector> = images.iter().map(|&j| ctx.mb[j].clone()).collect();
            let Some(w) = solve_unimodular(ctx.source, &image) else {
                return Ok(None);
            };
            let maps_onto = ctx.ma.iter().all(|g| {
                let y: IntVector = w.iter().map(|row| int_dot(row, g)).collect();
                ctx.targets.contains(&y)
            });
            return Ok(maps_onto.then_some(w));
        }
        let want = ctx.fa[ctx.basis[depth]];
        for j in 0..ctx.mb.len() {
            if ctx.fb[j] != want || images.contains(&j) {
                continue;
            }
            images.push(j);
            let found = search(depth + 1, images, ctx, explored)?;
            images.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    let ctx = SearchContext { ma: &ma, mb: &mb, fa: &fa, fb: &fb, basis: &basis, source: &source, targets: &targets, budget };
    Ok(search(0, &mut images, &ctx, &mut explored)?.map(|matrix| SemigroupIsomorphism { matrix, source: ga, target: gb }))
}

struct SearchContext<'a> {
    ma: &'a [IntVector],
    mb: &'a [IntVector],
    fa: &'a [(usize, usize)],
    fb: &'a [(usize, usize)],
    basis: &'a [usize],
    source: &'a [IntVector],
    targets: &'a HashSet<&'a IntVector>,
    budget: u64,
}
