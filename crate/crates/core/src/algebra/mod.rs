//! Exact fields, monomials, sparse polynomials and dense matrices.

pub mod field;
pub mod matrix;
pub mod monomial;
pub mod parse;
pub mod poly;

pub use field::{FieldSpec, Scalar};
pub use matrix::Matrix;
pub use monomial::Monomial;
pub use parse::{parse, parse_in, parse_many};
pub use poly::{Polynomial, Ring, Substitution};
