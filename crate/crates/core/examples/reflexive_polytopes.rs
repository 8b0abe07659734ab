//! Duals, reflexivity and face-by-face lattice point counts.

use toric_picard::cone::vectors;
use toric_picard::polytope::{dual_polytope, hull_of_ints, ReflexivePair};

fn main() {
    let quintic = hull_of_ints(&vectors(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, -1, -1, -1]])).unwrap();
    let pair = ReflexivePair::new(quintic).unwrap();
    println!("dual vertices: {:?}", pair.dual.vertices());
    println!("dual lattice points: {}", pair.dual.lattice_points().len());
    for face in pair.dual.faces_of_dim(1).iter().take(3) {
        let points = pair.dual.relint_lattice_points(face).len();
        println!("edge {:?}: {points} interior points", face.vertices);
    }
    let back = dual_polytope(&pair.dual).unwrap();
    println!("double dual equals the original: {}", back.vertices() == pair.polytope.vertices());

    let wps = hull_of_ints(&vectors(&[&[-1, -1, -1, -3], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
    println!("P(1,1,1,1,3) simplex reflexive: {}", wps.is_reflexive().unwrap());
}
