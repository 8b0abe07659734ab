//! Section bases on the projective line: the class `k[0] + l[inf]` has
//! exactly the integers in `[-k, l]` as a basis.

use toric_picard::cone::{validate_fan, vectors};
use toric_picard::divisor::{section_basis, RhoClass};

fn main() {
    let p1 = validate_fan(1, vectors(&[&[1], &[-1]]), vec![vec![0], vec![1]]).unwrap();
    for (k, l) in [(1, 1), (1, 2), (3, 5)] {
        let basis = section_basis(&p1, &RhoClass::from_i64s(&[k, l]).unwrap()).unwrap();
        let pts: Vec<String> = basis.iter().map(|p| p.entries()[0].to_string()).collect();
        println!("k={k} l={l}: {} sections at [{}]", basis.len(), pts.join(", "));
    }
}
