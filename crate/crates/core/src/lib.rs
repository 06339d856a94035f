//! Exact computation of the frame invariant Λ of a polynomial map from a
//! compact hypersurface into a Stiefel manifold, through signatures of trace
//! quadratic forms, and of Whitney intersection numbers of polynomial
//! immersions through the Jacobian frame.
//!
//! Everything on the product path is exact rational arithmetic. The
//! [`oracle`] module is a floating-point cross-check.

pub mod error;
pub mod groebner;
pub mod immersion;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod quadform;
pub mod stiefel;

pub use error::{Error, FormKind, Result};
pub use parse::{format_poly, parse_poly, ParseError};
pub use poly::{Monomial, MonomialOrder, PolyMatrix, Polynomial, Rational, RationalMatrix, Ring};
