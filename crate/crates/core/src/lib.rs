//! Exact computations around the strength of polynomials: Fano-scheme
//! equations, residual constructions, numeric thresholds and verified
//! rational parametrizations of quadrics and cubics containing a line.

pub mod algebra;
pub mod bounds;
pub mod error;
pub mod fano;
pub mod ideals;
pub mod residual;
pub mod sampling;
pub mod strength;
pub mod unirat;

pub use algebra::{
    parse, parse_in, FieldSpec, Matrix, Monomial, Polynomial, Ring, Scalar, Substitution,
};
pub use error::{Error, Result};
