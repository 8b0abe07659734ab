//! Quotients of P^4 by diagonal groups, and the arithmetic reflexivity
//! test for weight simplices.

use toric_picard::constructions::{quotient_toric, reflexive_simplex_check, DiagonalGroup, WeightSystem};
use toric_picard::lattice::{rat, RationalVector};

fn main() {
    let w = WeightSystem::new(vec![1; 5]).unwrap();
    let mut gens = DiagonalGroup::scalars(&w).generators().to_vec();
    gens.push(RationalVector::new(vec![rat(1, 5), rat(4, 5), rat(0, 1), rat(0, 1), rat(0, 1)]));
    let q = quotient_toric(&w, &DiagonalGroup::new(gens.clone()), &[]).unwrap();
    println!("index {} over the ray lattice", q.index);
    for d in &q.deltas {
        println!("  {d:?}");
    }
    let check = reflexive_simplex_check(&w, &DiagonalGroup::new(gens), false).unwrap();
    println!("check passes: {}, hull reflexive: {}", check.pass, check.reflexive);

    for weights in [vec![1, 1, 1, 1, 2], vec![1, 1, 2, 2, 2], vec![1, 1, 1, 1, 3]] {
        let w = WeightSystem::new(weights.clone()).unwrap();
        let c = reflexive_simplex_check(&w, &DiagonalGroup::scalars(&w), false).unwrap();
        println!("{weights:?}: pass {}, reflexive {}, failing {:?}", c.pass, c.reflexive, c.failing);
    }
}
