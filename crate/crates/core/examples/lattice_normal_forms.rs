//! Hermite and Smith forms, kernels and quotient invariants over Z.

use toric_picard::lattice::{hermite_normal_form, integer_kernel, quotient_invariants, smith_normal_form, IntMatrix};
use toric_picard::cone::vectors;

fn main() {
    let m = IntMatrix::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let h = hermite_normal_form(&m);
    println!("HNF pivots {:?}", h.pivots);
    for r in h.h.row_vectors() {
        println!("  {r:?}");
    }
    let s = smith_normal_form(&m);
    println!("invariant factors {:?}", s.diagonal());

    // Relations among the rays of P(1,1,2,2,2).
    let beta = IntMatrix::from_i64_rows(&[&[-1, 1, 0, 0, 0], &[-2, 0, 1, 0, 0], &[-2, 0, 0, 1, 0], &[-2, 0, 0, 0, 1]]);
    println!("kernel {:?}", integer_kernel(&beta));

    let sub = vectors(&[&[1, 1], &[1, -1]]);
    println!("Z^2 / <(1,1), (1,-1)> = {:?}", quotient_invariants(&sub, 2).unwrap());
}
