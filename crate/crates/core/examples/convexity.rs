//! Convexity of support functions on P^2 refined by the ray e1 + e2.

use toric_picard::cone::{validate_fan, vectors};
use toric_picard::divisor::{convexity, delta_l, epigraph_cone, section_basis, support_function, RhoClass};

fn main() {
    let fan = validate_fan(
        2,
        vectors(&[&[1, 0], &[0, 1], &[1, 1], &[-1, -1]]),
        vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
    )
    .unwrap();
    for rho in [[1, 1, 1, 1], [1, 1, 2, 1], [1, 1, 3, 1]] {
        let r = RhoClass::from_i64s(&rho).unwrap();
        let forms: Vec<_> = support_function(&fan, &r).unwrap().forms().to_vec();
        print!("rho {rho:?}: {:?}, forms {forms:?}", convexity(&fan, &r).unwrap());
        match epigraph_cone(&fan, &r) {
            Ok(c) => println!(", {} sections, epigraph facets {}", section_basis(&fan, &r).unwrap().len(), c.cone.h_representation().facets.len()),
            Err(e) => println!(", {e}"),
        }
    }

    let dented = validate_fan(
        2,
        vectors(&[&[1, 0], &[2, 1], &[-1, 0], &[2, -1]]),
        vec![vec![0, 3], vec![0, 1], vec![1, 2], vec![2, 3]],
    )
    .unwrap();
    println!("dented fan: union of simplices convex = {}", delta_l(&dented).unwrap().is_convex());
}
