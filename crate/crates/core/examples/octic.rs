//! The octic in P(1,1,2,2,2). The singular curve of the ambient space is
//! resolved by one extra ray, and the codim-two corrections are listed.

use toric_picard::constructions::{triangulate_refinement, weighted_projective, WeightSystem};
use toric_picard::picard::{correction_pairings, fan_polytope, maximal_ray_set, picard_anticanonical};

fn main() {
    let wps = weighted_projective(&WeightSystem::new(vec![1, 1, 2, 2, 2]).unwrap()).unwrap();
    let rays = maximal_ray_set(&fan_polytope(&wps.fan).unwrap()).unwrap();
    let added: Vec<_> = rays.iter().filter(|r| !wps.fan.rays().contains(r)).collect();
    println!("added rays: {added:?}");
    let fan = triangulate_refinement(&wps.fan.to_collection(), &rays).unwrap();
    let report = picard_anticanonical(&fan).unwrap();
    for c in report.corrections.iter().filter(|c| c.count() > 0) {
        println!("face {:?}: {} x {}", c.face_rays, c.face_points.len(), c.dual_points.len());
    }
    println!("pairings {:?}", correction_pairings(&report));
    println!("Picard rank {} = toric {} + corrections", report.total_rank, report.toric_rank);
}
