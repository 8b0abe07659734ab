//! Exact convex polytopes, their duals and lattice points, and the two
//! polytopes attached to a fan and a divisor class.

use std::collections::HashSet;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cone::Cone;
use crate::dd::facets_of_generators;
use crate::error::{Error, Result};
use crate::lattice::{rank_of, BigInt, BigRational, IntVector, RationalVector};

pub const MAX_DIMENSION: usize = 6;

/// The half-space `<x, normal> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: IntVector,
    pub offset: BigRational,
}

impl Facet {
    fn slack(&self, x: &RationalVector) -> BigRational {
        self.normal.dot_rational(x) - &self.offset
    }
}

/// The hyperplane `<x, normal> = value`, one of the affine hull equations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub normal: IntVector,
    pub value: BigRational,
}

/// A face given by the polytope vertices on it and the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolytopeFace {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
}

/// A convex polytope with both descriptions. Lower-dimensional polytopes
/// carry their affine hull as a list of equations.
#[derive(Debug)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<RationalVector>,
    facets: Vec<Facet>,
    equations: Vec<Equation>,
    dim: usize,
    faces: OnceLock<Vec<Vec<PolytopeFace>>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            ambient: self.ambient,
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            equations: self.equations.clone(),
            dim: self.dim,
            faces: self.faces.clone(),
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

/// Sorted, duplicate-free integer points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LatticePointSet(Vec<IntVector>);

impl LatticePointSet {
    pub fn from_unsorted(mut pts: Vec<IntVector>) -> Self {
        pts.sort();
        pts.dedup();
        LatticePointSet(pts)
    }

    pub fn points(&self) -> &[IntVector] {
        &self.0
    }

    pub fn into_points(self) -> Vec<IntVector> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, IntVector> {
        self.0.iter()
    }
}

impl<'a> IntoIterator for &'a LatticePointSet {
    type Item = &'a IntVector;
    type IntoIter = std::slice::Iter<'a, IntVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Convex hull of a nonempty point set.
pub fn hull(points: &[RationalVector]) -> Result<Polytope> {
    let first = points.first().ok_or(Error::Empty("points"))?;
    let n = first.dim();
    if n > MAX_DIMENSION {
        return Err(Error::DimensionTooLarge(n));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
    }
    let mut pts: Vec<RationalVector> = points.to_vec();
    pts.sort();
    pts.dedup();

    let homog: Vec<IntVector> = pts
        .iter()
        .map(|p| {
            let (v, k) = p.clear_denominators();
            v.lift(k)
        })
        .collect();
    let dd = facets_of_generators(&homog, n + 1);

    let equations: Vec<Equation> = dd
        .lineality
        .iter()
        .map(|e| {
            let (a, b) = split(e);
            Equation { value: BigRational::from_integer(-b), normal: a }
        })
        .collect();
    let mut facets: Vec<Facet> = Vec::new();
    for r in &dd.rays {
        // Inequalities tight at no input point are the trivial t >= 0.
        if !homog.iter().any(|h| r.dot(h).is_zero()) {
            continue;
        }
        let (a, b) = split(r);
        let g = a.content();
        if g.is_zero() {
            continue;
        }
        facets.push(Facet {
            normal: IntVector::new(a.entries().iter().map(|x| x / &g).collect()),
            offset: BigRational::new(-b, g),
        });
    }
    facets.sort();

    let eq_normals: Vec<IntVector> = equations.iter().map(|e| e.normal.clone()).collect();
    let dim = n - rank_of(&eq_normals);
    let vertices: Vec<RationalVector> = pts
        .into_iter()
        .filter(|p| {
            let mut tight: Vec<IntVector> =
                facets.iter().filter(|f| f.slack(p).is_zero()).map(|f| f.normal.clone()).collect();
            tight.extend(eq_normals.iter().cloned());
            rank_of(&tight) == n
        })
        .collect();

    Ok(Polytope { ambient: n, vertices, facets, equations, dim, faces: OnceLock::new() })
}

fn split(v: &IntVector) -> (IntVector, BigInt) {
    (v.truncate(), v.last().clone())
}

pub fn hull_of_ints(points: &[IntVector]) -> Result<Polytope> {
    hull(&points.iter().map(IntVector::to_rational).collect::<Vec<_>>())
}

impl Polytope {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    fn on_affine_hull(&self, x: &RationalVector) -> bool {
        self.equations.iter().all(|e| e.normal.dot_rational(x) == e.value)
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.on_affine_hull(x) && self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn contains_int(&self, x: &IntVector) -> bool {
        self.contains(&x.to_rational())
    }

    /// In the relative interior: on the affine hull, strictly inside every facet.
    pub fn in_relative_interior(&self, x: &RationalVector) -> bool {
        self.on_affine_hull(x) && self.facets.iter().all(|f| f.slack(x).is_positive())
    }

    /// Indices of facets tight at `x`.
    pub fn tight_facets(&self, x: &RationalVector) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.facets[i].slack(x).is_zero()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(RationalVector::is_integral)
    }

    /// Whether the origin is an interior point of a full-dimensional polytope.
    pub fn has_interior_origin(&self) -> bool {
        self.is_full_dimensional() && self.facets.iter().all(|f| f.offset.is_negative())
    }

    pub fn is_reflexive(&self) -> Result<bool> {
        Ok(self.is_integral() && dual_polytope(self)?.is_integral())
    }

    /// Integer range of coordinate `k = prefix.len()` over the fiber of
    /// this polytope above `prefix`, or `None` if it has no integer point.
    fn fiber(&self, prefix: &[BigInt]) -> Option<(BigInt, BigInt)> {
        let k = prefix.len();
        let rest = |normal: &IntVector| -> BigRational {
            BigRational::from_integer(normal.entries()[..k].iter().zip(prefix).map(|(a, x)| a * x).sum())
        };
        let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
        for e in &self.equations {
            let a = &e.normal[k];
            let r = &e.value - rest(&e.normal);
            if a.is_zero() {
                if !r.is_zero() {
                    return None;
                }
                continue;
            }
            let t = r / BigRational::from_integer(a.clone());
            if !t.is_integer() {
                return None;
            }
            let t = t.to_integer();
            lo = Some(lo.map_or(t.clone(), |l| l.max(t.clone())));
            hi = Some(hi.map_or(t.clone(), |h| h.min(t)));
        }
        for f in &self.facets {
            let a = &f.normal[k];
            let r = &f.offset - rest(&f.normal);
            if a.is_zero() {
                if r.is_positive() {
                    return None;
                }
                continue;
            }
            let t = r / BigRational::from_integer(a.clone());
            if a.is_positive() {
                let t = t.ceil().to_integer();
                lo = Some(lo.map_or(t.clone(), |l| l.max(t)));
            } else {
                let t = t.floor().to_integer();
                hi = Some(hi.map_or(t.clone(), |h| h.min(t)));
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) if l <= h => Some((l, h)),
            (Some(_), Some(_)) => None,
            _ => unreachable!("polytopes are bounded"),
        }
    }

    /// Walk the fibers of the coordinate projections, so only prefixes
    /// whose fiber meets the polytope are visited.
    fn scan(&self, strict: bool) -> LatticePointSet {
        let n = self.ambient;
        if self.vertices.is_empty() || n == 0 {
            return LatticePointSet::default();
        }
        let shadows: Vec<Polytope> = (1..n)
            .map(|k| {
                let pts: Vec<RationalVector> =
                    self.vertices.iter().map(|v| RationalVector::new(v.entries()[..k].to_vec())).collect();
                hull(&pts).expect("projection of a nonempty polytope")
            })
            .collect();
        let levels: Vec<&Polytope> = shadows.iter().chain(std::iter::once(self)).collect();
        let Some((lo0, hi0)) = levels[0].fiber(&[]) else {
            return LatticePointSet::default();
        };
        let pts: Vec<IntVector> = num_iter(&lo0, &hi0)
            .par_iter()
            .flat_map_iter(|x0| {
                let mut out = Vec::new();
                let mut cur = vec![x0.clone()];
                self.scan_rec(&levels, &mut cur, strict, &mut out);
                out
            })
            .collect();
        LatticePointSet::from_unsorted(pts)
    }

    fn scan_rec(&self, levels: &[&Polytope], cur: &mut Vec<BigInt>, strict: bool, out: &mut Vec<IntVector>) {
        if cur.len() == self.ambient {
            let x = IntVector::new(cur.clone());
            if !strict || self.in_relative_interior(&x.to_rational()) {
                out.push(x);
            }
            return;
        }
        let Some((lo, hi)) = levels[cur.len()].fiber(cur) else { return };
        for v in num_iter(&lo, &hi) {
            cur.push(v);
            self.scan_rec(levels, cur, strict, out);
            cur.pop();
        }
    }

    pub fn lattice_points(&self) -> LatticePointSet {
        self.scan(false)
    }

    /// Lattice points in the relative interior.
    pub fn relative_interior_lattice_points(&self) -> LatticePointSet {
        self.scan(true)
    }

    /// The face lattice, grouped by dimension; index `k` holds the
    /// `k`-dimensional faces. The polytope itself is the single top face.
    pub fn faces(&self) -> &[Vec<PolytopeFace>] {
        self.faces.get_or_init(|| self.enumerate_faces())
    }

    fn enumerate_faces(&self) -> Vec<Vec<PolytopeFace>> {
        let nv = self.vertices.len();
        let on_facet: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| (0..nv).filter(|&i| f.slack(&self.vertices[i]).is_zero()).collect())
            .collect();
        let face_dim = |vs: &[usize]| -> usize {
            if vs.is_empty() {
                return 0;
            }
            let base = &self.vertices[vs[0]];
            let diffs: Vec<IntVector> =
                vs[1..].iter().map(|&i| self.vertices[i].sub(base).clear_denominators().0).collect();
            rank_of(&diffs)
        };
        let mut out: Vec<Vec<PolytopeFace>> = vec![Vec::new(); self.dim + 1];
        let mut frontier: Vec<Vec<usize>> = vec![(0..nv).collect()];
        let mut seen: HashSet<Vec<usize>> = frontier.iter().cloned().collect();
        let mut d = self.dim;
        loop {
            let mut next = Vec::new();
            for vs in &frontier {
                let facets: Vec<usize> = (0..self.facets.len())
                    .filter(|&f| vs.iter().all(|v| on_facet[f].binary_search(v).is_ok()))
                    .collect();
                out[d].push(PolytopeFace { dim: d, vertices: vs.clone(), facets });
                if d == 0 {
                    continue;
                }
                for f in &on_facet {
                    let sub: Vec<usize> = vs.iter().copied().filter(|v| f.binary_search(v).is_ok()).collect();
                    if sub.is_empty() || sub.len() == vs.len() {
                        continue;
                    }
                    if face_dim(&sub) + 1 == d && seen.insert(sub.clone()) {
                        next.push(sub);
                    }
                }
            }
            if d == 0 || next.is_empty() {
                break;
            }
            d -= 1;
            frontier = next;
        }
        for v in out.iter_mut() {
            v.sort();
        }
        out
    }

    pub fn faces_of_dim(&self, k: usize) -> &[PolytopeFace] {
        self.faces().get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn faces_of_codim(&self, c: usize) -> &[PolytopeFace] {
        if c > self.dim {
            return &[];
        }
        self.faces_of_dim(self.dim - c)
    }

    /// The face as a polytope in its own right.
    pub fn face_polytope(&self, face: &PolytopeFace) -> Polytope {
        let vs: Vec<RationalVector> = face.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
        hull(&vs).expect("faces are nonempty")
    }

    pub fn relint_lattice_points(&self, face: &PolytopeFace) -> LatticePointSet {
        self.face_polytope(face).relative_interior_lattice_points()
    }
}

fn num_iter(lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut x = lo.clone();
    while &x <= hi {
        out.push(x.clone());
        x += 1;
    }
    out
}

/// `{y : <x, y> >= -1 for all x in P}`.
pub fn dual_polytope(p: &Polytope) -> Result<Polytope> {
    if p.ambient > MAX_DIMENSION {
        return Err(Error::DimensionTooLarge(p.ambient));
    }
    if !p.has_interior_origin() {
        return Err(Error::OriginNotInterior);
    }
    let verts: Vec<RationalVector> = p
        .facets
        .iter()
        .map(|f| f.normal.to_rational().scale(&(-f.offset.recip())))
        .collect();
    hull(&verts)
}

/// A reflexive polytope together with its dual.
#[derive(Clone, Debug)]
pub struct ReflexivePair {
    pub polytope: Polytope,
    pub dual: Polytope,
}

impl ReflexivePair {
    pub fn new(p: Polytope) -> Result<Self> {
        let dual = dual_polytope(&p)?;
        if !(p.is_integral() && dual.is_integral()) {
            return Err(Error::NotReflexive);
        }
        Ok(ReflexivePair { polytope: p, dual })
    }

    /// The face of the dual on which every point of `face` pairs to -1.
    pub fn dual_face(&self, face: &PolytopeFace) -> PolytopeFace {
        let minus_one = -BigRational::one();
        let verts: Vec<usize> = (0..self.dual.vertices.len())
            .filter(|&j| {
                face.vertices
                    .iter()
                    .all(|&i| self.polytope.vertices[i].dot(&self.dual.vertices[j]) == minus_one)
            })
            .collect();
        self.dual
            .faces()
            .iter()
            .flatten()
            .find(|f| f.vertices == verts)
            .cloned()
            .expect("dual vertex set of a face is a face")
    }
}

/// Height-one cross-section of the dual epigraph cone, projected to L*.
pub fn delta_lstar_rho(c_rho_dual: &Cone) -> Result<Polytope> {
    let mut verts = Vec::with_capacity(c_rho_dual.generators().len());
    for g in c_rho_dual.generators() {
        let h = g.last();
        if !h.is_positive() {
            return Err(Error::UnboundedSection);
        }
        let h = BigRational::from_integer(h.clone());
        verts.push(RationalVector::new(
            g.truncate().entries().iter().map(|x| BigRational::from_integer(x.clone()) / &h).collect(),
        ));
    }
    hull(&verts)
}

/// Union of the simplices `conv(0, rays of sigma)` over the max cones of a
/// complete fan.
#[derive(Clone, Debug)]
pub struct SimplicialRegion {
    ambient: usize,
    rays: Vec<IntVector>,
    simplices: Vec<Vec<usize>>,
    convex: bool,
    hull: Option<Polytope>,
}

impl SimplicialRegion {
    pub(crate) fn new(ambient: usize, rays: Vec<IntVector>, simplices: Vec<Vec<usize>>, convex: bool) -> Result<Self> {
        let hull = if convex { Some(hull_of_ints(&rays)?) } else { None };
        Ok(SimplicialRegion { ambient, rays, simplices, convex, hull })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn hull(&self) -> Option<&Polytope> {
        self.hull.as_ref()
    }

    fn simplex(&self, s: &[usize]) -> Polytope {
        let mut pts: Vec<IntVector> = s.iter().map(|&i| self.rays[i].clone()).collect();
        pts.push(IntVector::zero(self.ambient));
        hull_of_ints(&pts).expect("nonempty")
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        match &self.hull {
            Some(h) => h.contains(x),
            None => self.simplices.iter().any(|s| self.simplex(s).contains(x)),
        }
    }

    pub fn lattice_points(&self) -> LatticePointSet {
        match &self.hull {
            Some(h) => h.lattice_points(),
            None => {
                let pts: Vec<IntVector> = self
                    .simplices
                    .par_iter()
                    .flat_map_iter(|s| self.simplex(s).lattice_points().into_points())
                    .collect();
                LatticePointSet::from_unsorted(pts)
            }
        }
    }
}
