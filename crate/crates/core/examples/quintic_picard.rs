//! The quintic threefold: both rank formulas on the fan of P^4.

use toric_picard::constructions::{weighted_projective, WeightSystem};
use toric_picard::divisor::{RhoClass, Section};
use toric_picard::picard::{check_conditions, picard_anticanonical, picard_hypersurface, prop6_certificate};

fn main() {
    let fan = weighted_projective(&WeightSystem::new(vec![1; 5]).unwrap()).unwrap().fan;
    let rho = RhoClass::anticanonical(5);
    let cond = check_conditions(&fan, &rho).unwrap();
    println!("condition i: {}, condition ii: {}", cond.cond_i, cond.cond_ii);

    let s = Section::generic_full(&fan, &rho).unwrap();
    println!("generic section with {} monomials", s.support().len());
    let general = picard_hypersurface(&fan, &rho, &s).unwrap();
    let reflexive = picard_anticanonical(&fan).unwrap();
    println!("general formula: toric {} + corrections -> {}", general.toric_rank, general.total_rank);
    println!("reflexive formula: {}", reflexive.total_rank);
    println!("smoothness: {:?}", prop6_certificate(&fan).unwrap().verdict);
}
