//! Rational Picard rank of a generic hypersurface in a toric variety.
//!
//! Two independent routes: the general one works with the epigraph cone
//! of a convex class in `L + Z`; the anticanonical one works only with the
//! face lattices of the reflexive pair `Delta(L)`, `Delta(L)*`.

use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;

use crate::cone::{refinement, Cone, ConeCollection, Fan};
use crate::divisor::{
    delta_l, epigraph_cone, graph_fan, is_convex, lemma5_condition, section_polytope, RhoClass, Section,
};
use crate::error::{Error, Hypothesis, Result};
use crate::lattice::{rank_of, IntVector, RationalVector};
use crate::polytope::{hull, Polytope, ReflexivePair};

/// Hypotheses of the general rank formula, with the offending data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    /// No lifted ray lies in the relative interior of a facet of the epigraph cone.
    pub cond_i: bool,
    pub offending_rays: Vec<usize>,
    /// The graph fan refines the fan of facets of the epigraph cone.
    pub cond_ii: bool,
    pub offending_cones: Vec<usize>,
    /// The section polytope is integral.
    pub newton_full: bool,
}

pub fn check_conditions(fan: &Fan, rho: &RhoClass) -> Result<ConditionReport> {
    let ep = epigraph_cone(fan, rho)?;
    let facets = &ep.cone.h_representation().facets;
    let gens = ep.cone.generators();
    let tight: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| (0..facets.len()).filter(|&f| facets[f].dot(g).is_zero()).collect())
        .collect();
    let offending_rays: Vec<usize> = (0..gens.len()).filter(|&i| tight[i].len() == 1).collect();

    let offending_cones = if ep.strongly_convex {
        let extreme = ep.cone.extreme_generators();
        let lambda = ConeCollection {
            ambient: fan.lattice_rank() + 1,
            rays: extreme.iter().map(|&i| gens[i].clone()).collect(),
            cones: (0..facets.len())
                .map(|f| (0..extreme.len()).filter(|&j| tight[extreme[j]].contains(&f)).collect())
                .collect(),
        };
        let r = refinement(&graph_fan(fan, rho)?, &lambda)?;
        let mut bad = r.uncontained;
        if !r.uncovered.is_empty() && bad.is_empty() {
            bad = (0..fan.max_cones().len()).collect();
        }
        bad
    } else {
        // A cone with lineality has no 1-faces to build the boundary fan from.
        (0..fan.max_cones().len()).collect()
    };

    let newton_full = section_polytope(fan, rho)?.is_integral();
    Ok(ConditionReport {
        cond_i: offending_rays.is_empty(),
        offending_rays,
        cond_ii: offending_cones.is_empty(),
        offending_cones,
        newton_full,
    })
}

/// One codimension-two face and its interior lattice points on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    /// Indices of fan rays lying on the face.
    pub face_rays: Vec<usize>,
    /// Lattice points of `Delta(L)` in the relative interior of the face.
    pub face_points: Vec<IntVector>,
    /// Lattice points of the section polytope in the relative interior of
    /// the dual face.
    pub dual_points: Vec<IntVector>,
}

impl Correction {
    pub fn count(&self) -> usize {
        self.face_points.len() * self.dual_points.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardReport {
    /// `d - n`, the rank of the ambient Picard group.
    pub toric_rank: usize,
    pub corrections: Vec<Correction>,
    pub total_rank: usize,
    pub assumptions: Vec<String>,
}

impl PicardReport {
    fn assemble(toric_rank: usize, mut corrections: Vec<Correction>, assumptions: Vec<String>) -> Self {
        corrections.sort_by(|a, b| a.face_rays.cmp(&b.face_rays));
        let total_rank = toric_rank + corrections.iter().map(Correction::count).sum::<usize>();
        PicardReport { toric_rank, corrections, total_rank, assumptions }
    }
}

const RATIONAL_PICARD: &str = "divisor lattice taken as Z^d; rational Picard groups do not depend on the over-lattice";

/// Picard rank of a generic quasi-smooth hypersurface in the class of `rho`.
pub fn picard_hypersurface(fan: &Fan, rho: &RhoClass, s: &Section) -> Result<PicardReport> {
    let n = fan.lattice_rank();
    if n < 4 {
        return Err(Error::PreconditionFailed(Hypothesis::DimensionAtLeastFour));
    }
    fan.require_complete()?;
    if !is_convex(fan, rho)? {
        return Err(Error::PreconditionFailed(Hypothesis::ConvexRho));
    }
    if !lemma5_condition(fan, rho, s)? {
        return Err(Error::PreconditionFailed(Hypothesis::NewtonPolytopeFull));
    }
    let cond = check_conditions(fan, rho)?;
    if !cond.cond_i {
        return Err(Error::PreconditionFailed(Hypothesis::NoRayInFacetInterior));
    }
    if !cond.cond_ii {
        return Err(Error::PreconditionFailed(Hypothesis::RefinesBoundaryFan));
    }

    let ep = epigraph_cone(fan, rho)?;
    let facets = ep.cone.h_representation().facets.clone();
    let lifted = ep.cone.generators().to_vec();
    let on_facet: Vec<BTreeSet<usize>> = facets
        .iter()
        .map(|f| (0..lifted.len()).filter(|&i| f.dot(&lifted[i]).is_zero()).collect())
        .collect();

    let mut faces: BTreeSet<(Vec<usize>, usize, usize)> = BTreeSet::new();
    for a in 0..facets.len() {
        for b in a + 1..facets.len() {
            let common: Vec<usize> = on_facet[a].intersection(&on_facet[b]).copied().collect();
            let vs: Vec<IntVector> = common.iter().map(|&i| lifted[i].clone()).collect();
            if rank_of(&vs) == n - 1 {
                faces.insert((common, a, b));
            }
        }
    }

    let region = delta_l(fan)?;
    let region_points = region.lattice_points();
    let corrections: Vec<Correction> = faces
        .into_par_iter()
        .map(|(rays, a, b)| {
            let proj = Cone::new(rays.iter().map(|&i| fan.rays()[i].clone()).collect(), n).expect("nonzero rays");
            let face_points: Vec<IntVector> =
                region_points.iter().filter(|x| proj.in_relative_interior(x)).cloned().collect();
            let ends: Vec<RationalVector> = [a, b].iter().map(|&f| dehomogenize(&facets[f])).collect();
            let dual_points = hull(&ends).expect("two points").relative_interior_lattice_points().into_points();
            Correction { face_rays: rays, face_points, dual_points }
        })
        .collect();

    let mut assumptions = vec![
        "generic section: Newton polytope equals the section polytope, so the hypersurface is quasi-smooth"
            .to_string(),
        "conditions (i) and (ii) verified".to_string(),
        RATIONAL_PICARD.to_string(),
    ];
    if !s.is_generic() {
        assumptions[0] = "section coefficients assumed general; quasi-smoothness not checked".to_string();
    }
    if !region.is_convex() {
        assumptions.push("Delta(L) is not convex; face points counted simplex by simplex".to_string());
    }
    Ok(PicardReport::assemble(fan.rays().len() - n, corrections, assumptions))
}

fn dehomogenize(v: &IntVector) -> RationalVector {
    let h = num_rational::BigRational::from_integer(v.last().clone());
    RationalVector::new(
        v.truncate().entries().iter().map(|x| num_rational::BigRational::from_integer(x.clone()) / &h).collect(),
    )
}

/// The reflexive polytope `Delta(L)` of a fan with convex anticanonical class.
pub fn fan_polytope(fan: &Fan) -> Result<Polytope> {
    let region = delta_l(fan)?;
    region.hull().cloned().ok_or(Error::PreconditionFailed(Hypothesis::ConvexRegion))
}

/// Fan rays in the relative interior of a facet of `p`.
fn rays_in_facet_interiors(fan: &Fan, p: &Polytope) -> Vec<usize> {
    (0..fan.rays().len()).filter(|&i| p.tight_facets(&fan.rays()[i].to_rational()).len() == 1).collect()
}

/// Whether the fan refines the fan over the faces of `p`.
fn refines_face_fan(fan: &Fan, p: &Polytope) -> Result<bool> {
    let verts: Vec<IntVector> = p.vertices().iter().map(|v| v.to_int_vector().expect("integral")).collect();
    let face_fan = ConeCollection {
        ambient: p.ambient(),
        rays: verts,
        cones: p.faces_of_codim(1).iter().map(|f| f.vertices.clone()).collect(),
    };
    Ok(refinement(&fan.to_collection(), &face_fan)?.holds())
}

/// Picard rank for the anticanonical hypersurface over a reflexive
/// `Delta(L)`, read off the face lattices of `Delta(L)` and its dual.
pub fn picard_anticanonical(fan: &Fan) -> Result<PicardReport> {
    let n = fan.lattice_rank();
    if n < 4 {
        return Err(Error::PreconditionFailed(Hypothesis::DimensionAtLeastFour));
    }
    fan.require_complete()?;
    let pair = ReflexivePair::new(fan_polytope(fan)?)?;
    if !rays_in_facet_interiors(fan, &pair.polytope).is_empty() {
        return Err(Error::PreconditionFailed(Hypothesis::NoRayInFacetInterior));
    }
    if !refines_face_fan(fan, &pair.polytope)? {
        return Err(Error::PreconditionFailed(Hypothesis::RefinesBoundaryFan));
    }
    let faces = pair.polytope.faces_of_codim(2).to_vec();
    let corrections: Vec<Correction> = faces
        .par_iter()
        .map(|f| {
            let fp = pair.polytope.face_polytope(f);
            let face_rays = (0..fan.rays().len()).filter(|&i| fp.contains_int(&fan.rays()[i])).collect();
            let dual_face = pair.dual_face(f);
            Correction {
                face_rays,
                face_points: fp.relative_interior_lattice_points().into_points(),
                dual_points: pair.dual.relint_lattice_points(&dual_face).into_points(),
            }
        })
        .collect();
    let assumptions = vec![
        "generic anticanonical section".to_string(),
        "Delta(L) reflexive; no ray in a facet interior; fan refines the face fan of Delta(L)".to_string(),
        RATIONAL_PICARD.to_string(),
    ];
    Ok(PicardReport::assemble(fan.rays().len() - n, corrections, assumptions))
}

/// Boundary lattice points of a reflexive polytope not interior to a facet.
pub fn maximal_ray_set(delta: &Polytope) -> Result<Vec<IntVector>> {
    ReflexivePair::new(delta.clone())?;
    Ok(delta
        .lattice_points()
        .into_points()
        .into_iter()
        .filter(|x| delta.tight_facets(&x.to_rational()).len() >= 2)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    SmoothCy,
    NotCertified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessCertificate {
    /// The ray set is exactly the maximal ray set.
    pub maximal: bool,
    pub missing_rays: Vec<IntVector>,
    pub extra_rays: Vec<IntVector>,
    pub verdict: Verdict,
    /// Hypotheses that did not hold.
    pub failed: Vec<Hypothesis>,
}

/// Certify smoothness of the anticanonical threefold hypersurface when the
/// fan uses every admissible boundary point. Never certifies singularity.
pub fn prop6_certificate(fan: &Fan) -> Result<SmoothnessCertificate> {
    let n = fan.lattice_rank();
    if n != 4 {
        return Err(Error::WrongDimension(n));
    }
    fan.require_complete()?;
    let region = delta_l(fan)?;
    let mut failed = Vec::new();
    let p = match region.hull() {
        Some(h) => h.clone(),
        None => {
            failed.push(Hypothesis::ConvexRegion);
            crate::polytope::hull_of_ints(fan.rays())?
        }
    };
    let maximal_set: BTreeSet<IntVector> = maximal_ray_set(&p)?.into_iter().collect();
    let rays: BTreeSet<IntVector> = fan.rays().iter().cloned().collect();
    let missing_rays: Vec<IntVector> = maximal_set.difference(&rays).cloned().collect();
    let extra_rays: Vec<IntVector> = rays.difference(&maximal_set).cloned().collect();
    if !rays_in_facet_interiors(fan, &p).is_empty() {
        failed.push(Hypothesis::NoRayInFacetInterior);
    }
    if failed.is_empty() && !refines_face_fan(fan, &p)? {
        failed.push(Hypothesis::RefinesBoundaryFan);
    }
    let maximal = missing_rays.is_empty() && extra_rays.is_empty();
    let verdict = if maximal && failed.is_empty() { Verdict::SmoothCy } else { Verdict::NotCertified };
    Ok(SmoothnessCertificate { maximal, missing_rays, extra_rays, verdict, failed })
}

/// Sum over correction pairs of `<x, y>`; each pair pairs to -1 in the
/// anticanonical case.
pub fn correction_pairings(report: &PicardReport) -> Vec<num_bigint::BigInt> {
    report
        .corrections
        .iter()
        .flat_map(|c| {
            c.face_points.iter().flat_map(move |x| c.dual_points.iter().map(move |y| x.dot(y)))
        })
        .collect()
}
