//! Toric divisors: the lattice of divisor relations, support functions and
//! their convexity, the epigraph cone of a divisor class, section bases and
//! local charts.
//!
//! The divisor lattice is always `D0 = Z^d` with one basis vector per ray.
//! Any over-lattice with the same rational span gives the same rational
//! Picard group, so no finer lattice is constructed.

use num_traits::{One, Signed, Zero};

use crate::cone::{star_subdivide, Cone, ConeCollection, Fan};
use crate::error::{Error, Result};
use crate::lattice::{
    integer_kernel, inverse_rational, quotient_invariants, solve_rational, BigInt, BigRational, IntMatrix,
    IntVector, RationalVector,
};
use crate::polytope::{delta_lstar_rho, hull_of_ints, LatticePointSet, Polytope, SimplicialRegion};

/// The map `beta0: Z^d -> L` sending each divisor basis vector to its ray,
/// and a basis of its kernel (the lattice of linear relations among rays).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorLattice {
    beta0: IntMatrix,
    n_basis: Vec<IntVector>,
}

impl DivisorLattice {
    /// Number of rays.
    pub fn d(&self) -> usize {
        self.beta0.cols()
    }

    pub fn lattice_rank(&self) -> usize {
        self.beta0.rows()
    }

    /// Columns are the rays.
    pub fn beta0(&self) -> &IntMatrix {
        &self.beta0
    }

    /// Z-basis of the relation lattice, in Hermite normal form.
    pub fn n_basis(&self) -> &[IntVector] {
        &self.n_basis
    }

    /// Restriction of a functional on Z^d to the relation lattice, in the
    /// basis dual to [`Self::n_basis`].
    pub fn restrict(&self, functional: &IntVector) -> IntVector {
        IntVector::new(self.n_basis.iter().map(|b| b.dot(functional)).collect())
    }

    /// Class of the toric divisor of ray `i`.
    pub fn ray_class(&self, i: usize) -> IntVector {
        self.restrict(&IntVector::unit(self.d(), i))
    }
}

pub fn divisor_lattice(fan: &Fan) -> DivisorLattice {
    let beta0 = IntMatrix::from_rows(fan.rays(), fan.lattice_rank()).transpose();
    let n_basis = integer_kernel(&beta0);
    DivisorLattice { beta0, n_basis }
}

/// Rational Picard group of a complete simplicial toric variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricPicardBasis {
    pub rank: usize,
    /// Relation lattice basis; the Picard basis is its dual.
    pub basis: Vec<IntVector>,
    /// Coordinates of each toric divisor class in the dual basis.
    pub ray_classes: Vec<IntVector>,
}

pub fn picard_basis_toric(fan: &Fan) -> Result<ToricPicardBasis> {
    fan.require_complete()?;
    let dl = divisor_lattice(fan);
    let ray_classes = (0..dl.d()).map(|i| dl.ray_class(i)).collect();
    Ok(ToricPicardBasis { rank: dl.n_basis.len(), basis: dl.n_basis, ray_classes })
}

/// Non-negative integer coefficients, one per ray, not all zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RhoClass(Vec<BigInt>);

impl RhoClass {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(Signed::is_negative) {
            return Err(Error::NegativeRho(i));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroRho);
        }
        Ok(RhoClass(coeffs))
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// All coefficients one: the anticanonical class.
    pub fn anticanonical(d: usize) -> Self {
        RhoClass(vec![BigInt::one(); d])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_anticanonical(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    fn check(&self, fan: &Fan) -> Result<()> {
        if self.0.len() != fan.rays().len() {
            return Err(Error::RhoLength { expected: fan.rays().len(), got: self.0.len() });
        }
        Ok(())
    }
}

/// One linear form per max cone, interpolating rho on the cone's rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    forms: Vec<RationalVector>,
}

impl SupportFunction {
    pub fn form(&self, sigma: usize) -> &RationalVector {
        &self.forms[sigma]
    }

    pub fn forms(&self) -> &[RationalVector] {
        &self.forms
    }

    pub fn evaluate(&self, fan: &Fan, x: &RationalVector) -> Result<BigRational> {
        let xi = x.clear_denominators().0;
        let s = fan.find_cone(&xi).ok_or(Error::OutsideSupport)?;
        Ok(self.forms[s].dot(x))
    }
}

pub fn support_function(fan: &Fan, rho: &RhoClass) -> Result<SupportFunction> {
    fan.require_complete()?;
    rho.check(fan)?;
    let forms = (0..fan.max_cones().len())
        .map(|s| {
            let rows: Vec<Vec<BigRational>> = fan
                .max_cones()[s]
                .iter()
                .map(|&i| fan.rays()[i].to_rational().entries().to_vec())
                .collect();
            let rhs: Vec<BigRational> =
                fan.max_cones()[s].iter().map(|&i| BigRational::from_integer(rho.0[i].clone())).collect();
            RationalVector::new(solve_rational(&rows, &rhs).expect("simplicial cones are nonsingular"))
        })
        .collect();
    Ok(SupportFunction { forms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convexity {
    NotConvex,
    Convex,
    StrictlyConvex,
}

/// Compare each cone's linear form against rho on every ray.
pub fn convexity(fan: &Fan, rho: &RhoClass) -> Result<Convexity> {
    let sf = support_function(fan, rho)?;
    let mut strict = true;
    for (s, cone) in fan.max_cones().iter().enumerate() {
        for (i, ray) in fan.rays().iter().enumerate() {
            let v = ray.dot_rational(sf.form(s));
            let r = BigRational::from_integer(rho.0[i].clone());
            if v > r {
                return Ok(Convexity::NotConvex);
            }
            if v == r && cone.binary_search(&i).is_err() {
                strict = false;
            }
        }
    }
    Ok(if strict { Convexity::StrictlyConvex } else { Convexity::Convex })
}

pub fn is_convex(fan: &Fan, rho: &RhoClass) -> Result<bool> {
    Ok(convexity(fan, rho)? != Convexity::NotConvex)
}

pub fn is_strictly_convex(fan: &Fan, rho: &RhoClass) -> Result<bool> {
    Ok(convexity(fan, rho)? == Convexity::StrictlyConvex)
}

/// Rays lifted to the graph of rho, `(delta, rho_delta)`, in ray order.
pub fn lifted_rays(fan: &Fan, rho: &RhoClass) -> Vec<IntVector> {
    fan.rays().iter().zip(&rho.0).map(|(r, h)| r.lift(h.clone())).collect()
}

/// The epigraph of a convex support function as a cone in `L + Z`.
#[derive(Clone, Debug)]
pub struct EpigraphCone {
    /// Generated by the lifted rays, in ray order.
    pub cone: Cone,
    pub strongly_convex: bool,
    /// Every lifted ray spans an extreme ray.
    pub irredundant: bool,
}

pub fn epigraph_cone(fan: &Fan, rho: &RhoClass) -> Result<EpigraphCone> {
    if !is_convex(fan, rho)? {
        return Err(Error::NotConvexRho);
    }
    let cone = Cone::new(lifted_rays(fan, rho), fan.lattice_rank() + 1)?;
    let strongly_convex = cone.is_strongly_convex();
    let irredundant = strongly_convex && cone.extreme_generators().len() == fan.rays().len();
    Ok(EpigraphCone { cone, strongly_convex, irredundant })
}

/// `p_rho: Z^d -> L + Z`, `e_delta -> (delta, rho_delta)`, and its adjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PRhoMap {
    /// `(n+1) x d`, columns are the lifted rays.
    pub forward: IntMatrix,
    /// `d x (n+1)`, the transpose: `(l, a) -> beta*(l) + a rho`.
    pub dual: IntMatrix,
}

impl PRhoMap {
    pub fn apply(&self, x: &IntVector) -> IntVector {
        self.forward.mul_vec(x)
    }

    pub fn apply_dual(&self, y: &IntVector) -> IntVector {
        self.dual.mul_vec(y)
    }
}

pub fn p_rho_map(fan: &Fan, rho: &RhoClass) -> Result<PRhoMap> {
    rho.check(fan)?;
    let dual = IntMatrix::from_rows(&lifted_rays(fan, rho), fan.lattice_rank() + 1);
    Ok(PRhoMap { forward: dual.transpose(), dual })
}

/// The cones of the fan lifted onto the graph of the support function.
pub fn graph_fan(fan: &Fan, rho: &RhoClass) -> Result<ConeCollection> {
    fan.require_complete()?;
    rho.check(fan)?;
    Ok(ConeCollection {
        ambient: fan.lattice_rank() + 1,
        rays: lifted_rays(fan, rho),
        cones: fan.max_cones().to_vec(),
    })
}

/// The point `q_L = (0, ..., 0, 1)` pointing up the height axis.
pub fn q_l(lattice_rank: usize) -> IntVector {
    IntVector::unit(lattice_rank + 1, lattice_rank)
}

/// Graph fan starred at `q_L`. Its support is the epigraph of the support
/// function, convex or not.
pub fn starred(fan: &Fan, rho: &RhoClass) -> Result<Fan> {
    let g = graph_fan(fan, rho)?;
    star_subdivide(&g, &q_l(fan.lattice_rank())).map_err(|e| match e {
        Error::QInsideSupport => Error::QOnGraph,
        e => e,
    })
}

/// `{x : <delta, x> >= -rho_delta for every ray}`, the section polytope.
pub fn section_polytope(fan: &Fan, rho: &RhoClass) -> Result<Polytope> {
    let ep = epigraph_cone(fan, rho)?;
    let dual = Cone::new(ep.cone.h_representation().facets.clone(), fan.lattice_rank() + 1)?;
    delta_lstar_rho(&dual)
}

/// Lattice points of the section polytope; they index a basis of sections.
pub fn section_basis(fan: &Fan, rho: &RhoClass) -> Result<LatticePointSet> {
    Ok(section_polytope(fan, rho)?.lattice_points())
}

/// The union of simplices `conv(0, rays of sigma)`.
pub fn delta_l(fan: &Fan) -> Result<SimplicialRegion> {
    fan.require_complete()?;
    let convex = is_convex(fan, &RhoClass::anticanonical(fan.rays().len()))?;
    SimplicialRegion::new(fan.lattice_rank(), fan.rays().to_vec(), fan.max_cones().to_vec(), convex)
}

/// Coefficients of a section: explicit rationals or a generic choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    /// Every support coefficient nonzero and otherwise general.
    Generic,
    /// Parallel to the support.
    Explicit(Vec<BigRational>),
}

/// A section `s = sum alpha_x x` over lattice points `x` of the section
/// polytope. Zero coefficients are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    support: Vec<IntVector>,
    coefficients: Coefficients,
}

impl Section {
    pub fn generic(support: Vec<IntVector>) -> Self {
        let mut support = support;
        support.sort();
        support.dedup();
        Section { support, coefficients: Coefficients::Generic }
    }

    /// The generic section using every basis element.
    pub fn generic_full(fan: &Fan, rho: &RhoClass) -> Result<Self> {
        Ok(Self::generic(section_basis(fan, rho)?.into_points()))
    }

    pub fn explicit(terms: Vec<(IntVector, BigRational)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        terms.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 += a.1.clone();
                true
            } else {
                false
            }
        });
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let (support, coeffs) = terms.into_iter().unzip();
        Section { support, coefficients: Coefficients::Explicit(coeffs) }
    }

    pub fn support(&self) -> &[IntVector] {
        &self.support
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn is_generic(&self) -> bool {
        self.coefficients == Coefficients::Generic
    }

    /// Check the support against a section basis.
    pub fn bind(&self, basis: &LatticePointSet) -> Result<()> {
        match self.support.iter().find(|x| !basis.contains(x)) {
            Some(x) => Err(Error::SectionOutsideBasis(x.to_strings())),
            None => Ok(()),
        }
    }
}

/// Newton polytope: the hull of the support.
pub fn newton_polygon(s: &Section) -> Result<Polytope> {
    if s.support.is_empty() {
        return Err(Error::EmptySection);
    }
    hull_of_ints(&s.support)
}

/// The Newton polytope of `s` is the whole section polytope: the section
/// polytope is integral and every vertex carries a nonzero coefficient.
pub fn lemma5_condition(fan: &Fan, rho: &RhoClass, s: &Section) -> Result<bool> {
    let p = section_polytope(fan, rho)?;
    s.bind(&p.lattice_points())?;
    if !p.is_integral() {
        return Ok(false);
    }
    Ok(p.vertices().iter().all(|v| {
        let v = v.to_int_vector().expect("integral");
        s.support.binary_search(&v).is_ok()
    }))
}

/// Cones of the fan whose lifted relative interior lies in the relative
/// interior of the epigraph facet dual to `(v, 1)`. A hypersurface whose
/// section has a nonzero coefficient at `v` misses their torus orbits.
pub fn lemma4_avoided_orbits(fan: &Fan, rho: &RhoClass, s: &Section, v: &IntVector) -> Result<Vec<Vec<usize>>> {
    let p = section_polytope(fan, rho)?;
    if !p.vertices().contains(&v.to_rational()) {
        return Err(Error::NotAVertex);
    }
    if s.support.binary_search(v).is_err() {
        return Err(Error::VertexNotInSupport);
    }
    let ep = epigraph_cone(fan, rho)?;
    let lifted = lifted_rays(fan, rho);
    let normal = v.lift(BigInt::one());
    let others: Vec<&IntVector> = ep.cone.h_representation().facets.iter().filter(|f| **f != normal).collect();
    let on: Vec<bool> = lifted.iter().map(|l| l.dot(&normal).is_zero()).collect();
    let mut out = std::collections::BTreeSet::new();
    for cone in fan.max_cones() {
        let rays: Vec<usize> = cone.iter().copied().filter(|&i| on[i]).collect();
        for mask in 1u32..(1 << rays.len()) {
            let sub: Vec<usize> = (0..rays.len()).filter(|b| mask & (1 << b) != 0).map(|b| rays[b]).collect();
            let bary = sub.iter().fold(IntVector::zero(fan.lattice_rank() + 1), |a, &i| a.add(&lifted[i]));
            if others.iter().all(|f| f.dot(&bary).is_positive()) {
                out.insert(sub);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// One monomial of the local equation: `prod t_i^{k_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMonomial {
    pub point: IntVector,
    pub exponents: Vec<BigInt>,
}

/// The affine chart of a max cone of the starred fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalChart {
    pub cone: usize,
    pub deltas: Vec<IntVector>,
    /// Invariant factors of `L / sum Z delta_i`: the chart is `C^n` modulo
    /// a finite group of this shape.
    pub isotropy: Vec<BigInt>,
    /// `p_i = (delta_i, rho_i)` and last `p_{n+1} = q_L`.
    pub generators: Vec<IntVector>,
    /// Dual basis `p*_j` with `<p_i, p*_j> = [i = j]`.
    pub dual_basis: Vec<RationalVector>,
    /// Vanishes on `p_1 .. p_n`, pairs to one with `q_L`.
    pub z_sigma: RationalVector,
    pub z_sigma_integral: bool,
    pub monomials: Vec<ChartMonomial>,
}

pub fn local_chart(fan: &Fan, sigma: usize, rho: &RhoClass, s: &Section) -> Result<LocalChart> {
    if sigma >= fan.max_cones().len() {
        return Err(Error::ConeIndexOutOfRange(sigma));
    }
    let basis = section_basis(fan, rho)?;
    s.bind(&basis)?;
    let n = fan.lattice_rank();
    let deltas = fan.cone_rays(sigma);
    let isotropy = quotient_invariants(&deltas, n)?;
    let mut generators: Vec<IntVector> =
        fan.max_cones()[sigma].iter().map(|&i| fan.rays()[i].lift(rho.0[i].clone())).collect();
    generators.push(q_l(n));
    let inv = inverse_rational(&IntMatrix::from_rows(&generators, n + 1)).expect("simplicial cone");
    // Rows of P^{-T} are the dual basis.
    let dual_basis: Vec<RationalVector> =
        (0..=n).map(|j| RationalVector::new((0..=n).map(|i| inv[i][j].clone()).collect())).collect();
    let z_sigma = dual_basis[n].clone();
    let monomials = s
        .support
        .iter()
        .map(|x| {
            let xh = x.lift(BigInt::one());
            ChartMonomial { point: x.clone(), exponents: generators[..n].iter().map(|p| p.dot(&xh)).collect() }
        })
        .collect();
    Ok(LocalChart {
        cone: sigma,
        deltas,
        isotropy,
        generators,
        z_sigma_integral: z_sigma.is_integral(),
        dual_basis,
        z_sigma,
        monomials,
    })
}
