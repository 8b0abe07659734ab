//! Double description: extreme rays of `{x : A x >= 0}`.
//!
//! Incremental, one inequality at a time, with a lineality basis that
//! shrinks as inequalities cut it. Adjacency of two rays is decided
//! combinatorially from their sets of tight inequalities.

use num_traits::{Signed, Zero};

use crate::lattice::{canonical_subspace_basis, primitive_part, reduce_modulo, IntVector};

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn is_subset(&self, o: &BitSet) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: IntVector,
    tight: BitSet,
}

/// Pointed part plus lineality of a polyhedral cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ConeRays {
    /// Extreme rays modulo lineality, primitive, sorted, each orthogonal to
    /// the lineality space when it is nontrivial.
    pub rays: Vec<IntVector>,
    /// Canonical basis of the lineality space.
    pub lineality: Vec<IntVector>,
}

/// Extreme rays and lineality space of `{x in Q^dim : <a, x> >= 0 for a in ineqs}`.
pub(crate) fn rays_of_inequalities(ineqs: &[IntVector], dim: usize) -> ConeRays {
    let m = ineqs.len();
    let mut lineality: Vec<IntVector> = (0..dim).map(|i| IntVector::unit(dim, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed = BitSet::new(m);

    for (k, a) in ineqs.iter().enumerate() {
        debug_assert_eq!(a.dim(), dim);
        let cut = lineality.iter().position(|l| !a.dot(l).is_zero());
        if let Some(p) = cut {
            let mut l0 = lineality.remove(p);
            let mut s0 = a.dot(&l0);
            if s0.is_negative() {
                l0 = l0.neg();
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let s = a.dot(l);
                if !s.is_zero() {
                    let w = l.scale(&s0).sub(&l0.scale(&s));
                    *l = primitive_part(&w).expect("independent lineality vectors");
                }
            }
            for r in rays.iter_mut() {
                let s = a.dot(&r.v);
                if !s.is_zero() {
                    let w = r.v.scale(&s0).sub(&l0.scale(&s));
                    r.v = primitive_part(&w).expect("ray independent of lineality");
                }
                r.tight.insert(k);
            }
            rays.push(Ray { v: l0, tight: processed.clone() });
        } else {
            let scores: Vec<_> = rays.iter().map(|r| a.dot(&r.v)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| scores[i].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| scores[i].is_negative()).collect();
            let mut next: Vec<Ray> = Vec::new();
            if !neg.is_empty() {
                // Pointed dimension of the current cone bounds the number of
                // tight constraints an adjacent pair must share.
                let need = dim.saturating_sub(lineality.len()).saturating_sub(2);
                for &ip in &pos {
                    for &ineg in &neg {
                        let common = rays[ip].tight.and(&rays[ineg].tight);
                        if common.len() < need {
                            continue;
                        }
                        let adjacent = (0..rays.len())
                            .all(|r| r == ip || r == ineg || !common.is_subset(&rays[r].tight));
                        if !adjacent {
                            continue;
                        }
                        let sp = &scores[ip];
                        let sn = &scores[ineg];
                        let w = rays[ineg].v.scale(sp).sub(&rays[ip].v.scale(sn));
                        let mut tight = common;
                        tight.insert(k);
                        next.push(Ray { v: primitive_part(&w).expect("distinct rays"), tight });
                    }
                }
            }
            let old = std::mem::take(&mut rays);
            for (i, mut r) in old.into_iter().enumerate() {
                if scores[i].is_negative() {
                    continue;
                }
                if scores[i].is_zero() {
                    r.tight.insert(k);
                }
                rays.push(r);
            }
            rays.extend(next);
        }
        processed.insert(k);
    }

    let lineality = canonical_subspace_basis(&lineality);
    let mut out: Vec<IntVector> = rays
        .into_iter()
        .filter_map(|r| reduce_modulo(&r.v, &lineality))
        .collect();
    out.sort();
    out.dedup();
    ConeRays { rays: out, lineality }
}

/// Facet description of `cone(gens)`: inward normals and equations of the
/// linear span. A point `x` lies in the cone iff every normal pairs
/// non-negatively with it and every equation vanishes on it.
pub(crate) fn facets_of_generators(gens: &[IntVector], dim: usize) -> ConeRays {
    rays_of_inequalities(gens, dim)
}
