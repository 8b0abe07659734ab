//! Rational polyhedral cones, their faces and duals, and fans.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::dd::{facets_of_generators, rays_of_inequalities, ConeRays};
use crate::error::{Error, Result};
use crate::lattice::{inverse_rational, primitive_part, rank_of, BigRational, IntMatrix, IntVector, RationalVector};

/// Facet normals and span equations of a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    /// Primitive inward facet normals, sorted.
    pub facets: Vec<IntVector>,
    /// Basis of the linear forms vanishing on the cone's span.
    pub equations: Vec<IntVector>,
}

/// A finitely generated cone in Q^n.
#[derive(Debug)]
pub struct Cone {
    ambient: usize,
    generators: Vec<IntVector>,
    hrep: OnceLock<HRep>,
    lineality: OnceLock<Vec<IntVector>>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        Cone {
            ambient: self.ambient,
            generators: self.generators.clone(),
            hrep: self.hrep.clone(),
            lineality: self.lineality.clone(),
        }
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.generators == other.generators
    }
}

impl Cone {
    /// Cone spanned by `generators`. Each generator is replaced by its
    /// primitive part; order is kept so callers can index into it.
    pub fn new(generators: Vec<IntVector>, ambient: usize) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.dim() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, got: g.dim() });
            }
            gens.push(primitive_part(&g)?);
        }
        Ok(Cone { ambient, generators: gens, hrep: OnceLock::new(), lineality: OnceLock::new() })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        rank_of(&self.generators)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    pub fn h_representation(&self) -> &HRep {
        self.hrep.get_or_init(|| {
            let ConeRays { rays, lineality } = facets_of_generators(&self.generators, self.ambient);
            HRep { facets: rays, equations: lineality }
        })
    }

    /// Basis of the largest linear subspace contained in the cone.
    pub fn lineality(&self) -> &[IntVector] {
        self.lineality.get_or_init(|| {
            let h = self.h_representation();
            let mut ineqs = h.facets.clone();
            for e in &h.equations {
                ineqs.push(e.clone());
                ineqs.push(e.neg());
            }
            rays_of_inequalities(&ineqs, self.ambient).lineality
        })
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality().is_empty()
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        let h = self.h_representation();
        h.equations.iter().all(|e| e.dot(x).is_zero()) && h.facets.iter().all(|a| !a.dot(x).is_negative())
    }

    pub fn contains_rational(&self, x: &RationalVector) -> bool {
        self.contains(&x.clear_denominators().0)
    }

    /// Inside the cone and off every proper face.
    pub fn in_relative_interior(&self, x: &IntVector) -> bool {
        let h = self.h_representation();
        h.equations.iter().all(|e| e.dot(x).is_zero()) && h.facets.iter().all(|a| a.dot(x).is_positive())
    }

    /// Indices of generators spanning extreme rays (for pointed cones).
    pub fn extreme_generators(&self) -> Vec<usize> {
        let h = self.h_representation();
        let target = self.dim().saturating_sub(1);
        let mut seen = HashSet::new();
        (0..self.generators.len())
            .filter(|&i| {
                let g = &self.generators[i];
                let tight: Vec<IntVector> =
                    h.facets.iter().filter(|a| a.dot(g).is_zero()).cloned().collect();
                rank_of(&tight) == target && seen.insert(g.clone())
            })
            .collect()
    }
}

/// Dual cone of a full-dimensional strongly convex cone: its generators are
/// the primitive facet normals, sorted lexicographically.
pub fn dual_cone(c: &Cone) -> Result<Cone> {
    if !c.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    if !c.is_strongly_convex() {
        return Err(Error::NotStronglyConvex);
    }
    Cone::new(c.h_representation().facets.clone(), c.ambient)
}

/// A face of a cone: generators lying on it and the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeFace {
    pub dim: usize,
    /// Sorted generator indices of the cone lying on this face.
    pub generators: Vec<usize>,
    /// Sorted indices into the cone's facet list.
    pub facets: Vec<usize>,
}

/// All faces of a cone, grouped by dimension.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    by_dim: Vec<Vec<ConeFace>>,
}

impl FaceLattice {
    pub fn faces_of_dim(&self, k: usize) -> &[ConeFace] {
        self.by_dim.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConeFace> {
        self.by_dim.iter().flatten()
    }
}

/// Enumerate faces by intersecting with facets, top down.
pub fn cone_faces(c: &Cone) -> FaceLattice {
    let h = c.h_representation();
    let lin = c.lineality().len();
    let top_dim = c.dim();
    let face_dim = |gens: &[usize]| -> usize {
        let mut vs: Vec<IntVector> = gens.iter().map(|&i| c.generators[i].clone()).collect();
        vs.extend(c.lineality().iter().cloned());
        rank_of(&vs)
    };
    let tight_facets = |gens: &[usize]| -> Vec<usize> {
        (0..h.facets.len())
            .filter(|&f| gens.iter().all(|&i| h.facets[f].dot(&c.generators[i]).is_zero()))
            .collect()
    };
    let on_facet: Vec<BTreeSet<usize>> = h
        .facets
        .iter()
        .map(|a| (0..c.generators.len()).filter(|&i| a.dot(&c.generators[i]).is_zero()).collect())
        .collect();

    let mut by_dim: Vec<Vec<ConeFace>> = vec![Vec::new(); top_dim + 1];
    let all: Vec<usize> = (0..c.generators.len()).collect();
    let mut frontier: Vec<Vec<usize>> = vec![all];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(frontier[0].clone());
    let mut d = top_dim;
    loop {
        let mut next = Vec::new();
        for gens in &frontier {
            by_dim[d].push(ConeFace { dim: d, generators: gens.clone(), facets: tight_facets(gens) });
            if d == lin {
                continue;
            }
            let gs: BTreeSet<usize> = gens.iter().copied().collect();
            for f in &on_facet {
                let sub: Vec<usize> = gs.intersection(f).copied().collect();
                if sub.len() == gens.len() {
                    continue;
                }
                if face_dim(&sub) + 1 == d && seen.insert(sub.clone()) {
                    next.push(sub);
                }
            }
        }
        if d == lin || next.is_empty() {
            break;
        }
        d -= 1;
        frontier = next;
    }
    for v in by_dim.iter_mut() {
        v.sort();
    }
    FaceLattice { by_dim }
}

/// Precomputed barycentric coordinates for a full-dimensional simplicial
/// cone: `adj * x / det` are the coefficients of `x` in the generators.
#[derive(Clone, Debug)]
pub(crate) struct SimplicialFrame {
    adj: IntMatrix,
}

impl SimplicialFrame {
    pub(crate) fn new(gens: &[IntVector]) -> Option<Self> {
        let n = gens.len();
        let g = IntMatrix::from_rows(gens, n).transpose();
        let det = g.determinant();
        if det.is_zero() {
            return None;
        }
        let inv = inverse_rational(&g)?;
        let scale = BigRational::from_integer(det.abs());
        let mut adj = IntMatrix::zeros(n, n);
        for (i, row) in inv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                adj.set(i, j, (x * &scale).to_integer());
            }
        }
        Some(SimplicialFrame { adj })
    }

    /// Coefficients of `x` scaled by the positive number `|det|`.
    pub(crate) fn scaled_coords(&self, x: &IntVector) -> IntVector {
        self.adj.mul_vec(x)
    }

    pub(crate) fn contains(&self, x: &IntVector) -> bool {
        self.scaled_coords(x).entries().iter().all(|c| !c.is_negative())
    }
}

/// A collection of cones sharing a ray list. No simplicial or completeness
/// requirement; used for fans that arise as cone boundaries or face fans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCollection {
    pub ambient: usize,
    pub rays: Vec<IntVector>,
    /// Sorted ray index lists.
    pub cones: Vec<Vec<usize>>,
}

impl ConeCollection {
    pub fn cone(&self, i: usize) -> Cone {
        Cone::new(self.cones[i].iter().map(|&r| self.rays[r].clone()).collect(), self.ambient)
            .expect("rays are nonzero")
    }
}

/// A simplicial rational fan whose maximal cones have full dimension.
#[derive(Clone, Debug)]
pub struct Fan {
    lattice_rank: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
    complete: bool,
    frames: Vec<SimplicialFrame>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.lattice_rank == other.lattice_rank && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Fan {
    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::IncompleteFan)
        }
    }

    pub fn cone_rays(&self, sigma: usize) -> Vec<IntVector> {
        self.max_cones[sigma].iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn cone(&self, sigma: usize) -> Cone {
        Cone::new(self.cone_rays(sigma), self.lattice_rank).expect("rays are nonzero")
    }

    pub fn to_collection(&self) -> ConeCollection {
        ConeCollection { ambient: self.lattice_rank, rays: self.rays.clone(), cones: self.max_cones.clone() }
    }

    /// Scaled coefficients of `x` in the rays of max cone `sigma`.
    pub(crate) fn scaled_coords(&self, sigma: usize, x: &IntVector) -> IntVector {
        self.frames[sigma].scaled_coords(x)
    }

    /// Index of a max cone containing `x`, if any.
    pub fn find_cone(&self, x: &IntVector) -> Option<usize> {
        (0..self.max_cones.len()).find(|&s| self.frames[s].contains(x))
    }

    /// Smallest cone of the fan containing `x`, as sorted ray indices.
    pub fn locate(&self, x: &RationalVector) -> Result<Vec<usize>> {
        let xi = x.clear_denominators().0;
        let s = self.find_cone(&xi).ok_or(Error::OutsideSupport)?;
        let c = self.scaled_coords(s, &xi);
        let mut out: Vec<usize> =
            (0..c.dim()).filter(|&j| c[j].is_positive()).map(|j| self.max_cones[s][j]).collect();
        out.sort();
        Ok(out)
    }

    /// Coefficients of `x` on the rays of max cone `sigma`.
    pub fn coordinates_in(&self, sigma: usize, x: &IntVector) -> Vec<BigRational> {
        let gens = self.cone_rays(sigma);
        let det = IntMatrix::from_rows(&gens, self.lattice_rank).determinant().abs();
        self.scaled_coords(sigma, x)
            .entries()
            .iter()
            .map(|c| BigRational::new(c.clone(), det.clone()))
            .collect()
    }
}

/// Check rays and cones and assemble a [`Fan`]. Completeness is recorded
/// rather than required.
pub fn validate_fan(lattice_rank: usize, rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
    let n = lattice_rank;
    if rays.is_empty() {
        return Err(Error::Empty("rays"));
    }
    let mut seen = HashSet::new();
    for (i, r) in rays.iter().enumerate() {
        if r.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: r.dim() });
        }
        if !r.is_primitive() {
            return Err(Error::NonPrimitiveRay(i));
        }
        if !seen.insert(r.clone()) {
            return Err(Error::DuplicateRay(i));
        }
    }
    let mut cones = Vec::with_capacity(max_cones.len());
    let mut frames = Vec::with_capacity(max_cones.len());
    for (ci, c) in max_cones.into_iter().enumerate() {
        let mut c = c;
        c.sort();
        c.dedup();
        if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
            return Err(Error::RayIndexOutOfRange { cone: ci, index: bad });
        }
        if c.len() != n {
            return Err(Error::NonSimplicialCone(ci));
        }
        let gens: Vec<IntVector> = c.iter().map(|&i| rays[i].clone()).collect();
        let frame = SimplicialFrame::new(&gens).ok_or(Error::NonSimplicialCone(ci))?;
        cones.push(c);
        frames.push(frame);
    }
    let mut order: Vec<usize> = (0..cones.len()).collect();
    order.sort_by(|&a, &b| cones[a].cmp(&cones[b]));
    for w in order.windows(2) {
        if cones[w[0]] == cones[w[1]] {
            return Err(Error::OverlappingCones(w[0], w[1]));
        }
    }

    // Walls: each (n-1)-face is shared by at most two cones, on opposite sides.
    let mut walls: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (ci, c) in cones.iter().enumerate() {
        for drop in 0..n {
            let mut w = c.clone();
            let apex = w.remove(drop);
            walls.entry(w).or_default().push((ci, apex));
        }
    }
    let mut boundary_wall = false;
    for (wall, users) in &walls {
        match users.as_slice() {
            [_] => boundary_wall = true,
            [(c1, a1), (c2, a2)] => {
                let normal = wall_normal(&rays, wall, n);
                let s1 = normal.dot(&rays[*a1]);
                let s2 = normal.dot(&rays[*a2]);
                if s1.signum() == s2.signum() {
                    return Err(Error::OverlappingCones(*c1, *c2));
                }
            }
            more => return Err(Error::OverlappingCones(more[0].0, more[1].0)),
        }
    }

    // An interior point of each cone must avoid every other cone.
    for (ci, c) in cones.iter().enumerate() {
        let p = c.iter().fold(IntVector::zero(n), |acc, &i| acc.add(&rays[i]));
        for (cj, f) in frames.iter().enumerate() {
            if cj != ci && f.contains(&p) {
                return Err(Error::OverlappingCones(ci, cj));
            }
        }
    }

    Ok(Fan { lattice_rank: n, rays, max_cones: cones, complete: !boundary_wall, frames })
}

fn wall_normal(rays: &[IntVector], wall: &[usize], n: usize) -> IntVector {
    let m = IntMatrix::from_rows(&wall.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>(), n);
    let k = crate::lattice::integer_kernel(&m);
    debug_assert_eq!(k.len(), 1);
    k.into_iter().next().unwrap_or_else(|| IntVector::zero(n))
}

/// Outcome of a refinement check with the offending cones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Refinement {
    /// Fine cones contained in no coarse cone.
    pub uncontained: Vec<usize>,
    /// Coarse cones whose union of contained fine cones falls short of them.
    pub uncovered: Vec<usize>,
}

impl Refinement {
    pub fn holds(&self) -> bool {
        self.uncontained.is_empty() && self.uncovered.is_empty()
    }
}

/// Every fine cone lies in a coarse cone, and every coarse cone is the
/// union of the fine cones inside it.
pub fn refinement(fine: &ConeCollection, coarse: &ConeCollection) -> Result<Refinement> {
    if fine.ambient != coarse.ambient {
        return Err(Error::AmbientMismatch);
    }
    let coarse_cones: Vec<Cone> = (0..coarse.cones.len()).map(|i| coarse.cone(i)).collect();
    let fine_cones: Vec<Cone> = (0..fine.cones.len()).map(|i| fine.cone(i)).collect();
    let mut inside: Vec<Vec<usize>> = vec![Vec::new(); coarse_cones.len()];
    let mut out = Refinement::default();
    for (fi, fc) in fine_cones.iter().enumerate() {
        let mut hit = false;
        for (ki, k) in coarse_cones.iter().enumerate() {
            if fc.generators().iter().all(|g| k.contains(g)) {
                hit = true;
                if fc.dim() == k.dim() {
                    inside[ki].push(fi);
                }
            }
        }
        if !hit {
            out.uncontained.push(fi);
        }
    }
    for (ki, k) in coarse_cones.iter().enumerate() {
        if !covers(k, &inside[ki], &fine_cones) {
            out.uncovered.push(ki);
        }
    }
    Ok(out)
}

pub fn refines(fine: &ConeCollection, coarse: &ConeCollection) -> Result<bool> {
    Ok(refinement(fine, coarse)?.holds())
}

/// The full-dimensional (relative to `k`) simplicial pieces in `parts` tile
/// `k` iff every wall either lies in the boundary of `k` or is shared by
/// exactly two pieces on opposite sides, and no two pieces overlap.
fn covers(k: &Cone, parts: &[usize], cones: &[Cone]) -> bool {
    if parts.is_empty() {
        return false;
    }
    let d = k.dim();
    let h = k.h_representation();
    let mut walls: HashMap<Vec<IntVector>, Vec<IntVector>> = HashMap::new();
    for &p in parts {
        let gens = cones[p].generators();
        if gens.len() != d {
            // Non-simplicial piece: triangulate by pulling the first generator.
            return covers_by_pieces(k, parts, cones);
        }
        for drop in 0..d {
            let mut w: Vec<IntVector> = gens.to_vec();
            let apex = w.remove(drop);
            w.sort();
            walls.entry(w).or_default().push(apex);
        }
    }
    for (wall, apexes) in &walls {
        let in_boundary = h.facets.iter().any(|a| wall.iter().all(|g| a.dot(g).is_zero()));
        match apexes.len() {
            1 if in_boundary => {}
            2 if !in_boundary => {
                let mut span: Vec<IntVector> = wall.clone();
                span.extend(h.equations.iter().cloned());
                let m = IntMatrix::from_rows(&span, k.ambient());
                let ker = crate::lattice::integer_kernel(&m);
                let Some(nrm) = ker.first() else { return false };
                if nrm.dot(&apexes[0]).signum() == nrm.dot(&apexes[1]).signum() {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

fn covers_by_pieces(k: &Cone, parts: &[usize], cones: &[Cone]) -> bool {
    let mut simplices: Vec<Cone> = Vec::new();
    for &p in parts {
        for s in pull_triangulate(cones[p].generators(), cones[p].ambient()) {
            simplices.push(Cone::new(s, k.ambient()).expect("nonzero"));
        }
    }
    let idx: Vec<usize> = (0..simplices.len()).collect();
    covers(k, &idx, &simplices)
}

/// Triangulate the cone over `gens` without new rays by pulling generators
/// in order. Returns generator lists of full-dimensional simplicial cones.
pub(crate) fn pull_triangulate(gens: &[IntVector], ambient: usize) -> Vec<Vec<IntVector>> {
    let cone = Cone::new(gens.to_vec(), ambient).expect("nonzero");
    let d = cone.dim();
    let ext: Vec<IntVector> = cone.extreme_generators().into_iter().map(|i| cone.generators()[i].clone()).collect();
    if ext.len() == d {
        return vec![ext];
    }
    let apex = ext[0].clone();
    let h = cone.h_representation();
    let mut out = Vec::new();
    for a in &h.facets {
        if a.dot(&apex).is_zero() {
            continue;
        }
        let on: Vec<IntVector> = ext.iter().filter(|g| a.dot(g).is_zero()).cloned().collect();
        for mut s in pull_triangulate(&on, ambient) {
            s.insert(0, apex.clone());
            out.push(s);
        }
    }
    out
}

/// Replace each maximal cone `sigma` of `input` with the cones spanned by
/// `q` and the facets of `sigma`. Requires `q` outside the support.
pub fn star_subdivide(input: &ConeCollection, q: &IntVector) -> Result<Fan> {
    if q.dim() != input.ambient {
        return Err(Error::DimensionMismatch { expected: input.ambient, got: q.dim() });
    }
    for i in 0..input.cones.len() {
        if input.cone(i).contains(q) {
            return Err(Error::QInsideSupport);
        }
    }
    let q = primitive_part(q)?;
    let mut rays = input.rays.clone();
    let qi = rays.len();
    rays.push(q);
    let cones: Vec<Vec<usize>> = input
        .cones
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.push(qi);
            c
        })
        .collect();
    validate_fan(input.ambient, rays, cones)
}

/// The set of all rays of a fan as an ordered set, for comparisons.
pub fn ray_set(rays: &[IntVector]) -> BTreeSet<IntVector> {
    rays.iter().cloned().collect()
}

/// Helper for inputs that are lists of small integers.
pub fn vectors(rows: &[&[i64]]) -> Vec<IntVector> {
    rows.iter().map(|r| IntVector::from_i64s(r)).collect()
}
