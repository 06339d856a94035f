//! Exact sparse multivariate polynomials over the rationals, and the
//! polynomial and rational matrices built from them.

mod matrix;
mod monomial;
mod polynomial;

pub use matrix::{PolyMatrix, RationalMatrix};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::{Polynomial, Rational, Ring};

pub(crate) use polynomial::rational_to_f64;
