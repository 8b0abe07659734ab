//! Builders for weighted projective spaces, their quotients by finite
//! diagonal groups, and simplicial refinements of a fan by extra rays.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::{pull_triangulate, validate_fan, ConeCollection, Fan, SimplicialFrame};
use crate::error::{Error, Result};
use crate::lattice::{
    hermite_normal_form, inverse_rational, lattice_index, primitive_part, solve_rational, BigInt, BigRational,
    IntMatrix, IntVector, RationalVector,
};
use crate::polytope::hull_of_ints;

/// Positive weights `n_1 .. n_{k+1}` with `gcd(n_j : j != i) = 1` for every `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSystem(Vec<BigInt>);

impl WeightSystem {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        Self::from_bigints(weights.into_iter().map(BigInt::from).collect())
    }

    pub fn from_bigints(weights: Vec<BigInt>) -> Result<Self> {
        if weights.len() < 2 || weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::BadWeights);
        }
        for i in 0..weights.len() {
            let g = weights
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(BigInt::zero(), |g, (_, w)| g.gcd(w));
            if !g.is_one() {
                return Err(Error::BadWeights);
            }
        }
        Ok(WeightSystem(weights))
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `d = sum n_i`.
    pub fn degree(&self) -> BigInt {
        self.0.iter().sum()
    }

    /// Every weight divides the degree.
    pub fn is_fermat_type(&self) -> bool {
        let d = self.degree();
        self.0.iter().all(|n| d.is_multiple_of(n))
    }

    fn as_vector(&self) -> IntVector {
        IntVector::new(self.0.clone())
    }
}

/// A weighted projective space: its fan, the rays in `Z^n`, and the
/// relation `sum n_j delta_j = 0`.
#[derive(Clone, Debug)]
pub struct WeightedProjective {
    pub fan: Fan,
    pub kernel: IntVector,
}

/// Max cones on every `n`-subset of `0..=n`.
fn simplex_cones(m: usize) -> Vec<Vec<usize>> {
    (0..m).rev().map(|skip| (0..m).filter(|&j| j != skip).collect()).collect()
}

/// Rays of `P(n_1, .., n_{n+1})` in `Z^n`. With a weight equal to one, the
/// first such `delta_k` is eliminated and the others are the standard
/// basis; otherwise the rows of a unimodular completion are used.
pub fn weighted_projective(w: &WeightSystem) -> Result<WeightedProjective> {
    let m = w.len();
    let n = m - 1;
    let rays: Vec<IntVector> = match w.0.iter().position(One::is_one) {
        Some(k) => {
            let mut rays = Vec::with_capacity(m);
            let mut pos = 0;
            for j in 0..m {
                if j == k {
                    rays.push(IntVector::zero(n));
                } else {
                    rays.push(IntVector::unit(n, pos));
                    pos += 1;
                }
            }
            let mut dk = IntVector::zero(n);
            for j in (0..m).filter(|&j| j != k) {
                dk = dk.sub(&rays[j].scale(&w.0[j]));
            }
            rays[k] = dk;
            rays
        }
        None => {
            let col = IntMatrix::from_rows(&w.0.iter().map(|x| IntVector::new(vec![x.clone()])).collect::<Vec<_>>(), 1);
            let u = hermite_normal_form(&col).u;
            (0..m).map(|j| IntVector::new((1..m).map(|i| u.get(i, j).clone()).collect())).collect()
        }
    };
    let fan = validate_fan(n, rays, simplex_cones(m))?;
    Ok(WeightedProjective { fan, kernel: w.as_vector() })
}

/// Vertices of the section polytope of a weighted projective space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpsVertices {
    /// Row `j` is `(<delta_i, v_j>)_i`: `-rho_i` off the diagonal and
    /// `(1/n_j) sum_{k != j} rho_k n_k` on it.
    pub presentation: Vec<Vec<BigRational>>,
    /// The same vertices in the dual coordinates of the ray lattice.
    pub vertices: Vec<RationalVector>,
}

pub fn delta_lstar_vertices_wps(w: &WeightSystem, rho: &[BigInt]) -> Result<WpsVertices> {
    let m = w.len();
    if rho.len() != m {
        return Err(Error::RhoLength { expected: m, got: rho.len() });
    }
    let wp = weighted_projective(w)?;
    let presentation: Vec<Vec<BigRational>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| {
                    if i == j {
                        let s: BigInt = (0..m).filter(|&k| k != j).map(|k| &rho[k] * &w.0[k]).sum();
                        BigRational::new(s, w.0[j].clone())
                    } else {
                        BigRational::from_integer(-rho[i].clone())
                    }
                })
                .collect()
        })
        .collect();
    let rays = wp.fan.rays();
    let n = m - 1;
    // Any n of the rays are independent; use the first n.
    let rows: Vec<Vec<BigRational>> = rays[..n].iter().map(|r| r.to_rational().entries().to_vec()).collect();
    let vertices = presentation
        .iter()
        .map(|a| {
            let v = RationalVector::new(solve_rational(&rows, &a[..n]).expect("independent rays"));
            debug_assert_eq!(rays[n].dot_rational(&v), a[n]);
            v
        })
        .collect();
    Ok(WpsVertices { presentation, vertices })
}

/// A finite diagonal group, each generator an exponent vector `g` standing
/// for `exp(2 pi i g)`, entries reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalGroup(Vec<RationalVector>);

impl DiagonalGroup {
    pub fn new(generators: Vec<RationalVector>) -> Self {
        let reduced = generators
            .into_iter()
            .map(|g| {
                RationalVector::new(
                    g.entries().iter().map(|x| x - BigRational::from_integer(x.floor().to_integer())).collect(),
                )
            })
            .collect();
        DiagonalGroup(reduced)
    }

    /// The scalar group `Q`, generated by `w / d`.
    pub fn scalars(w: &WeightSystem) -> Self {
        let d = w.degree();
        Self::new(vec![RationalVector::new(
            w.0.iter().map(|n| BigRational::new(n.clone(), d.clone())).collect(),
        )])
    }

    pub fn generators(&self) -> &[RationalVector] {
        &self.0
    }

    fn check(&self, m: usize) -> Result<()> {
        if self.0.iter().any(|g| g.dim() != m) {
            return Err(Error::NotFiniteGroup);
        }
        Ok(())
    }
}

/// `Z^m + sum Z g_i`, stored as an integer basis of its `D`-multiple.
struct OverLattice {
    denom: BigInt,
    inverse: Vec<Vec<BigRational>>,
}

impl OverLattice {
    fn new(m: usize, group: &DiagonalGroup) -> Self {
        let denom = group.0.iter().fold(BigInt::one(), |l, g| l.lcm(&g.common_denominator()));
        let dr = BigRational::from_integer(denom.clone());
        let mut gens: Vec<IntVector> = (0..m).map(|i| IntVector::unit(m, i).scale(&denom)).collect();
        for g in &group.0 {
            gens.push(IntVector::new(g.scale(&dr).entries().iter().map(|x| x.to_integer()).collect()));
        }
        let h = hermite_normal_form(&IntMatrix::from_rows(&gens, m));
        let rows: Vec<IntVector> = (0..m).map(|i| h.h.row(i)).collect();
        let basis = IntMatrix::from_rows(&rows, m);
        let inverse = inverse_rational(&basis).expect("full rank");
        OverLattice { denom, inverse }
    }

    /// Coordinates of a rational vector in the lattice basis.
    fn coords(&self, x: &RationalVector) -> RationalVector {
        let dr = BigRational::from_integer(self.denom.clone());
        let y = x.scale(&dr);
        let m = y.dim();
        RationalVector::new(
            (0..m)
                .map(|j| (0..m).fold(BigRational::zero(), |acc, i| acc + &y[i] * &self.inverse[i][j]))
                .collect(),
        )
    }

    fn contains(&self, x: &RationalVector) -> bool {
        self.coords(x).is_integral()
    }
}

/// A quotient of a weighted projective space by a diagonal group.
#[derive(Clone, Debug)]
pub struct QuotientToric {
    /// Generator of the over-lattice along the weight line.
    pub q: RationalVector,
    /// Images of the coordinate vectors, in Hermite-canonical coordinates.
    pub deltas: Vec<IntVector>,
    /// `[L : sum Z delta_j]`.
    pub index: BigInt,
    /// The simplex fan, on the primitive rays along the `delta_j`.
    pub base_fan: Fan,
    /// The refinement by the extra rays, or the base fan.
    pub fan: Fan,
    /// Basis of the rational relation space, indexed by `0` and the extra rays.
    pub nbasis: Vec<NBasisVector>,
    /// Whether the scalar group is contained in the group.
    pub contains_scalars: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NBasisVector {
    /// `None` for the weight relation, otherwise the fan ray index.
    pub ray: Option<usize>,
    pub coefficients: RationalVector,
}

pub fn quotient_toric(w: &WeightSystem, group: &DiagonalGroup, extra_rays: &[IntVector]) -> Result<QuotientToric> {
    let m = w.len();
    let n = m - 1;
    group.check(m)?;
    let over = OverLattice::new(m, group);

    let wv = w.as_vector().to_rational();
    let lam = over.coords(&wv);
    let (lam_int, den) = lam.clear_denominators();
    let t = BigRational::new(den, lam_int.content());
    let q = wv.scale(&t);
    let q_coords = over.coords(&q).to_int_vector().expect("q lies in the lattice");

    let col = IntMatrix::from_rows(&q_coords.entries().iter().map(|x| IntVector::new(vec![x.clone()])).collect::<Vec<_>>(), 1);
    let u = hermite_normal_form(&col).u;
    let raw: Vec<IntVector> = (0..m)
        .map(|j| {
            let c = over.coords(&IntVector::unit(m, j).to_rational()).to_int_vector().expect("e_j lies in the lattice");
            let img = u.mul_vec(&c);
            IntVector::new(img.entries()[1..].to_vec())
        })
        .collect();
    // Canonical coordinates: the Hermite form of the ray matrix.
    let mat = IntMatrix::from_rows(&raw, n).transpose();
    let h = hermite_normal_form(&mat).h;
    let deltas: Vec<IntVector> = (0..m).map(|j| h.column(j)).collect();
    let index = lattice_index(&deltas, n)?;

    let prim: Vec<IntVector> = deltas.iter().map(primitive_part).collect::<Result<_>>()?;
    let base_fan = validate_fan(n, prim.clone(), simplex_cones(m))?;
    let fan = if extra_rays.is_empty() {
        base_fan.clone()
    } else {
        let mut all = prim.clone();
        for (i, r) in extra_rays.iter().enumerate() {
            if r.dim() != n {
                return Err(Error::InconsistentRays(format!("extra ray {i} has the wrong length")));
            }
            if !r.is_primitive() || all.contains(r) {
                return Err(Error::InconsistentRays(format!("extra ray {i} is not primitive or repeats a ray")));
            }
            all.push(r.clone());
        }
        triangulate_refinement(&base_fan.to_collection(), &all)?
    };

    // Relation among the primitive rays from sum n_j delta_j = 0.
    let mults: Vec<BigInt> = deltas.iter().map(IntVector::content).collect();
    let d = fan.rays().len();
    let mut rel = vec![BigInt::zero(); d];
    for j in 0..m {
        let idx = fan.rays().iter().position(|r| *r == prim[j]).expect("base ray present");
        rel[idx] = &w.0[j] * &mults[j];
    }
    let rel = primitive_part(&IntVector::new(rel))?;
    let mut nbasis = vec![NBasisVector { ray: None, coefficients: rel.to_rational() }];
    for (idx, ray) in fan.rays().iter().enumerate() {
        if prim.contains(ray) {
            continue;
        }
        let sigma = base_fan.find_cone(ray).ok_or(Error::RayOutsideSupport(idx))?;
        let coords = base_fan.coordinates_in(sigma, ray);
        let mut c = vec![BigRational::zero(); d];
        c[idx] = BigRational::one();
        for (k, &j) in base_fan.max_cones()[sigma].iter().enumerate() {
            let pos = fan.rays().iter().position(|r| *r == prim[j]).expect("base ray present");
            c[pos] -= &coords[k];
        }
        nbasis.push(NBasisVector { ray: Some(idx), coefficients: RationalVector::new(c) });
    }

    let contains_scalars = DiagonalGroup::scalars(w).0.iter().all(|g| over.contains(g));
    Ok(QuotientToric { q, deltas, index, base_fan, fan, nbasis, contains_scalars })
}

/// Outcome of the arithmetic reflexivity test for a weight simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexCheck {
    /// Every weight divides the degree (or, with the printed variant,
    /// `d / gcd(d, n_j)` is an integer, which always holds).
    pub fermat: bool,
    pub contains_scalars: bool,
    /// Every generator has determinant one and order dividing `d / n_i`
    /// in coordinate `i`.
    pub in_sd: bool,
    pub pass: bool,
    /// The first failing condition, if any.
    pub failing: Option<&'static str>,
    /// Reflexivity of the hull of the quotient rays, for comparison.
    pub reflexive: bool,
}

pub fn reflexive_simplex_check(w: &WeightSystem, group: &DiagonalGroup, printed_variant: bool) -> Result<SimplexCheck> {
    if w.len() != 5 {
        return Err(Error::WrongArity { expected: 5, got: w.len() });
    }
    group.check(5)?;
    let d = w.degree();
    let fermat = printed_variant || w.is_fermat_type();
    let over = OverLattice::new(5, group);
    let contains_scalars = DiagonalGroup::scalars(w).0.iter().all(|g| over.contains(g));
    let in_sd = group.0.iter().all(|g| {
        let s = g.entries().iter().fold(BigRational::zero(), |a, x| a + x);
        s.is_integer()
            && g.entries().iter().zip(&w.0).all(|(x, n)| {
                let di = &d / d.gcd(n);
                (x * BigRational::from_integer(di)).is_integer()
            })
    });
    let failing = if !fermat {
        Some("weights do not all divide the degree")
    } else if !contains_scalars {
        Some("group does not contain the scalar group")
    } else if !in_sd {
        Some("group is not inside the special diagonal group")
    } else {
        None
    };
    let qt = quotient_toric(w, group, &[])?;
    let reflexive = hull_of_ints(qt.fan.rays())?.is_reflexive()?;
    Ok(SimplexCheck { fermat, contains_scalars, in_sd, pass: failing.is_none(), failing, reflexive })
}

/// Order in which new rays are inserted by [`triangulate_refinement_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InsertionOrder {
    #[default]
    Lex,
    ReverseLex,
}

/// A simplicial fan with exactly `rays` refining `base`, built by inserting
/// the new rays one at a time with stellar subdivisions.
pub fn triangulate_refinement(base: &ConeCollection, rays: &[IntVector]) -> Result<Fan> {
    triangulate_refinement_with(base, rays, InsertionOrder::Lex)
}

pub fn triangulate_refinement_with(base: &ConeCollection, rays: &[IntVector], order: InsertionOrder) -> Result<Fan> {
    let n = base.ambient;
    for (i, r) in rays.iter().enumerate() {
        if r.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: r.dim() });
        }
        if !r.is_primitive() {
            return Err(Error::NonPrimitiveRay(i));
        }
        if rays[..i].contains(r) {
            return Err(Error::DuplicateRay(i));
        }
    }
    for r in &base.rays {
        if !rays.contains(r) {
            return Err(Error::InconsistentRays(format!("base ray {r:?} is missing")));
        }
    }

    // Working fan over the input ray list.
    let mut cones: Vec<(Vec<usize>, SimplicialFrame)> = Vec::new();
    let index_of = |v: &IntVector| rays.iter().position(|r| r == v).expect("ray present");
    for c in &base.cones {
        let mut gens: Vec<IntVector> = c.iter().map(|&i| base.rays[i].clone()).collect();
        gens.sort();
        for s in pull_triangulate(&gens, n) {
            if s.len() != n {
                return Err(Error::NotFullDimensional);
            }
            let idx: Vec<usize> = s.iter().map(index_of).collect();
            let frame = SimplicialFrame::new(&s).ok_or(Error::NotFullDimensional)?;
            cones.push((idx, frame));
        }
    }

    let mut new: Vec<usize> = (0..rays.len()).filter(|&i| !base.rays.contains(&rays[i])).collect();
    new.sort_by(|&a, &b| rays[a].cmp(&rays[b]));
    if order == InsertionOrder::ReverseLex {
        new.reverse();
    }
    for p in new {
        let x = &rays[p];
        let (ci, coords) = cones
            .iter()
            .enumerate()
            .find_map(|(ci, (_, f))| {
                let c = f.scaled_coords(x);
                c.entries().iter().all(|v| !v.is_negative()).then_some((ci, c))
            })
            .ok_or(Error::RayOutsideSupport(p))?;
        let tau: Vec<usize> =
            (0..n).filter(|&k| coords[k].is_positive()).map(|k| cones[ci].0[k]).collect();
        let old = std::mem::take(&mut cones);
        for (c, f) in old {
            if !tau.iter().all(|t| c.contains(t)) {
                cones.push((c, f));
                continue;
            }
            for v in &tau {
                let nc: Vec<usize> = c.iter().map(|&i| if i == *v { p } else { i }).collect();
                let gens: Vec<IntVector> = nc.iter().map(|&i| rays[i].clone()).collect();
                let frame = SimplicialFrame::new(&gens).expect("stellar pieces are full-dimensional");
                cones.push((nc, frame));
            }
        }
    }
    validate_fan(n, rays.to_vec(), cones.into_iter().map(|(c, _)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{refines, vectors};
    use crate::divisor::picard_basis_toric;
    use crate::lattice::{int, rat};

    fn ws(w: &[i64]) -> WeightSystem {
        WeightSystem::new(w.to_vec()).unwrap()
    }

    #[test]
    fn bad_weights() {
        assert_eq!(WeightSystem::new(vec![2, 2, 3]).unwrap_err(), Error::BadWeights);
    }

    #[test]
    fn p4_rays() {
        let wp = weighted_projective(&ws(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(
            wp.fan.rays(),
            vectors(&[&[-1, -1, -1, -1], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).as_slice()
        );
        assert!(wp.fan.is_complete());
    }

    #[test]
    fn octic_rays() {
        let wp = weighted_projective(&ws(&[1, 1, 2, 2, 2])).unwrap();
        assert_eq!(wp.fan.rays()[0], IntVector::from_i64s(&[-1, -2, -2, -2]));
        assert_eq!(&wp.fan.rays()[1..], vectors(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).as_slice());
        let b = picard_basis_toric(&wp.fan).unwrap();
        assert_eq!(b.basis, vec![IntVector::from_i64s(&[1, 1, 2, 2, 2])]);
    }

    #[test]
    fn no_unit_weight() {
        let w = ws(&[2, 3, 5]);
        let wp = weighted_projective(&w).unwrap();
        let rel = wp.fan.rays().iter().zip(w.weights()).fold(IntVector::zero(2), |a, (r, n)| a.add(&r.scale(n)));
        assert!(rel.is_zero());
        assert!(wp.fan.is_complete());
    }

    #[test]
    fn octic_vertex_formula() {
        let w = ws(&[1, 1, 2, 2, 2]);
        let v = delta_lstar_vertices_wps(&w, &[int(1), int(1), int(1), int(1), int(1)]).unwrap();
        assert_eq!(v.presentation[0][0], rat(7, 1));
        assert_eq!(v.presentation[2][2], rat(3, 1));
        assert_eq!(v.presentation[0][1], rat(-1, 1));
    }

    #[test]
    fn scalar_quotient_is_p4() {
        let w = ws(&[1, 1, 1, 1, 1]);
        let qt = quotient_toric(&w, &DiagonalGroup::scalars(&w), &[]).unwrap();
        assert_eq!(
            qt.deltas,
            vectors(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, -1, -1, -1]])
        );
        assert_eq!(qt.index, int(1));
        assert!(qt.contains_scalars);
        assert_eq!(qt.nbasis.len(), 1);
    }

    #[test]
    fn extended_quotient_has_index_five() {
        let w = ws(&[1, 1, 1, 1, 1]);
        let mut gens = DiagonalGroup::scalars(&w).generators().to_vec();
        gens.push(RationalVector::new(vec![rat(1, 5), rat(4, 5), rat(0, 1), rat(0, 1), rat(0, 1)]));
        let qt = quotient_toric(&w, &DiagonalGroup::new(gens), &[]).unwrap();
        assert_eq!(qt.index, int(5));
    }

    #[test]
    fn simplex_checks() {
        for (w, expect) in [(&[1, 1, 1, 1, 1][..], true), (&[1, 1, 1, 1, 3], false), (&[1, 1, 2, 2, 2], true)] {
            let w = ws(w);
            let c = reflexive_simplex_check(&w, &DiagonalGroup::scalars(&w), false).unwrap();
            assert_eq!(c.pass, expect);
            assert_eq!(c.reflexive, expect);
        }
        let w = ws(&[1, 1, 1]);
        assert_eq!(
            reflexive_simplex_check(&w, &DiagonalGroup::scalars(&w), false).unwrap_err(),
            Error::WrongArity { expected: 5, got: 3 }
        );
    }

    #[test]
    fn square_with_midpoints() {
        let base = ConeCollection {
            ambient: 2,
            rays: vectors(&[&[1, 1], &[-1, 1], &[-1, -1], &[1, -1]]),
            cones: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        };
        let mut rays = base.rays.clone();
        rays.extend(vectors(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]));
        let f = triangulate_refinement(&base, &rays).unwrap();
        assert_eq!(f.max_cones().len(), 8);
        assert!(f.is_complete());
        assert!(refines(&f.to_collection(), &base).unwrap());
    }

    #[test]
    fn ray_outside_support() {
        let base = ConeCollection { ambient: 2, rays: vectors(&[&[1, 0], &[0, 1]]), cones: vec![vec![0, 1]] };
        let rays = vectors(&[&[1, 0], &[0, 1], &[-1, 1]]);
        assert_eq!(triangulate_refinement(&base, &rays).unwrap_err(), Error::RayOutsideSupport(2));
    }
}
