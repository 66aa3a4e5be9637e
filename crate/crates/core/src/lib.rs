//! Exact construction of the Mirkovic-Vilonen basis of `V^{⊗n}` for the
//! natural representation `V` of SL2, together with machinery that replays
//! the chart computations behind it and checks them against brute-force
//! linear algebra.
//!
//! Module map:
//!
//! * [`words`]: ±-words, their paths, factorizations and crystal maps.
//! * [`exactalg`]: rational scalars and sparse word-indexed vectors.
//! * [`basis`]: the `y`-basis, x/y conversions and structural checks.
//! * [`rep`]: the sl2 action, filtrations and Cartan-component projections.
//! * [`symbolic`]: multivariate polynomials and rational functions over Q.
//! * [`charts`]: transition maps, truncated recursions and the coefficient rule.
//! * [`verify`]: the invariant suites driven by the CLI and the acceptance tests.

pub mod basis;
pub mod charts;
mod error;
pub mod exactalg;
pub mod rep;
pub mod report;
pub mod symbolic;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use exactalg::{BasisTag, Scalar, TensorVector};
pub use words::{Letter, Word};
