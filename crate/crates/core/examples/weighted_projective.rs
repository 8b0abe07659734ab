//! Fans of weighted projective spaces and the vertices of their section
//! polytopes, checked against the general cone construction.

use toric_picard::cone::dual_cone;
use toric_picard::constructions::{delta_lstar_vertices_wps, weighted_projective, WeightSystem};
use toric_picard::divisor::{epigraph_cone, picard_basis_toric, RhoClass};
use toric_picard::lattice::int;
use toric_picard::polytope::delta_lstar_rho;

fn main() {
    for w in [vec![1, 1, 1, 1, 1], vec![1, 1, 2, 2, 2], vec![1, 1, 1, 1, 3]] {
        let ws = WeightSystem::new(w.clone()).unwrap();
        let wps = weighted_projective(&ws).unwrap();
        let rank = picard_basis_toric(&wps.fan).unwrap().rank;
        println!("P{w:?}: degree {}, rays {:?}, Picard rank {rank}", ws.degree(), wps.fan.rays());

        let ones = vec![int(1); w.len()];
        let v = delta_lstar_vertices_wps(&ws, &ones).unwrap();
        let cone = dual_cone(&epigraph_cone(&wps.fan, &RhoClass::anticanonical(w.len())).unwrap().cone).unwrap();
        let direct = delta_lstar_rho(&cone).unwrap();
        let agree = direct.vertices().iter().all(|x| v.vertices.contains(x));
        println!("  anticanonical polytope integral: {}, formula agrees: {agree}", direct.is_integral());
    }
}
