//! Scalar backends and dense linear algebra.

mod cg;
mod matrix;
mod quadrature;
mod ratfunc;
mod scalar;

pub use cg::{pcg, LinearOperator, PcgOutcome};
pub use matrix::Matrix;
pub use quadrature::adaptive_simpson;
pub use ratfunc::{Polynomial, RationalFunction};
pub use scalar::{parse_rational, rational, rational_to_string, serialize_rational, Backend, Field, Rational, Scalar};
pub(crate) use scalar::is_positive;
