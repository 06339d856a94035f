//! Gröbner bases, normal forms, and the finite-dimensional quotient algebra
//! of a zero-dimensional ideal together with its trace functional.

mod basis;
mod quotient;

pub use basis::{buchberger, buchberger_with, BuchbergerOptions, GroebnerBasis, DEFAULT_MAX_SPAIRS};
pub use quotient::QuotientAlgebra;

pub use crate::poly::MonomialOrder;

use crate::error::Result;
use crate::poly::{Polynomial, Rational};

pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    gb.normal_form(p)
}

pub fn is_zero_dimensional(gb: &GroebnerBasis) -> bool {
    gb.is_zero_dimensional()
}

pub fn quotient_algebra(gb: GroebnerBasis) -> Result<QuotientAlgebra> {
    QuotientAlgebra::new(gb)
}

pub fn trace_of(h: &Polynomial, algebra: &QuotientAlgebra) -> Result<Rational> {
    algebra.trace_of(h)
}
