//! Rank-one double affine Hecke algebra computations.
//!
//! The crate realizes the difference-reflection representation of the
//! rank-one DAHA on Laurent polynomials, constructs the non-symmetric,
//! symmetric and anti-symmetric Askey-Wilson polynomials by several
//! independent routes, and checks the algebraic and analytic identities they
//! satisfy, exactly over the rationals or numerically with MPFR floats.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod forms;
pub mod laurent;
pub mod operators;
pub mod params;
pub mod polys;
pub mod qpoch;
pub mod report;
pub mod scalar;
pub mod transform;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use params::{Abcd, ParameterSet};
pub use scalar::{MpComplex, Rational, Scalar};
