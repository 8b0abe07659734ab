//! Exact rational Picard groups of complete simplicial toric varieties and
//! of generic quasi-smooth hypersurfaces in them.
//!
//! Everything is computed over Z and Q with arbitrary precision. The main
//! entry points are [`picard::picard_hypersurface`] and
//! [`picard::picard_anticanonical`]; the [`job`] module exposes the same
//! computations as JSON-in, JSON-out commands.

pub mod cone;
pub mod constructions;
mod dd;
pub mod divisor;
pub mod error;
pub mod job;
pub mod lattice;
pub mod picard;
pub mod polytope;

pub use error::{Error, Hypothesis, Result};
