//! The mirror quintic: refine the face fan of the 126-point simplex by its
//! maximal ray set and read off the Picard rank.

use std::time::Instant;

use toric_picard::cone::{vectors, ConeCollection};
use toric_picard::constructions::triangulate_refinement;
use toric_picard::picard::{maximal_ray_set, picard_anticanonical, prop6_certificate};
use toric_picard::polytope::hull_of_ints;

fn main() {
    let start = Instant::now();
    let vertices = vectors(&[&[4, -1, -1, -1], &[-1, 4, -1, -1], &[-1, -1, 4, -1], &[-1, -1, -1, 4], &[-1, -1, -1, -1]]);
    let delta = hull_of_ints(&vertices).unwrap();
    println!("lattice points: {}", delta.lattice_points().len());

    let rays = maximal_ray_set(&delta).unwrap();
    println!("maximal ray set: {}", rays.len());
    let base = ConeCollection {
        ambient: 4,
        rays: vertices,
        cones: (0..5).map(|skip| (0..5).filter(|&j| j != skip).collect()).collect(),
    };
    let fan = triangulate_refinement(&base, &rays).unwrap();
    println!("fan: {} rays, {} cones", fan.rays().len(), fan.max_cones().len());

    let report = picard_anticanonical(&fan).unwrap();
    println!("Picard rank {} (toric {})", report.total_rank, report.toric_rank);
    println!("smoothness: {:?}", prop6_certificate(&fan).unwrap().verdict);
    println!("{:.2?}", start.elapsed());
}
