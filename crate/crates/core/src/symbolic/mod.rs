//! Exact sparse multivariate polynomials and rational functions over ℚ.
//!
//! Every polynomial carries a shared [`VarTable`]; operators panic when two
//! operands use different tables and the `checked_*` methods report
//! [`Error::VarTableMismatch`](crate::Error::VarTableMismatch) instead.

mod gcd;
mod matrix;
mod modp;
mod poly;
mod ratfunc;
mod sparse;

pub use gcd::{content_in, gcd, primitive_part, pseudo_remainder};
pub use matrix::PolyMatrix2;
pub use poly::{GradedIdealSpec, Monomial, Poly, VarTable};
pub use ratfunc::{eval_at, RationalFunction};
pub(crate) use sparse::{Coef, Packing, SparsePoly};
