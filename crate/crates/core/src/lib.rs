//! Spherical tropicalization over truncated Puiseux series.
//!
//! The crate computes tropical points of subvarieties of algebraic tori,
//! punctured affine space, `GL_n`, `SL_n` and `PGL_n` by evaluating K-points
//! (Laurent series) and K̄-points (Puiseux series) exactly and reading off
//! valuations. For the matrix groups the tropical point is the tuple of
//! invariant factors, computed both from determinantal divisors and from a
//! Smith normal form over `k[[t^{1/m}]]`. Horn's inequalities decide which
//! invariant-factor triples occur for products `xy = z`.

pub mod error;
pub mod expr;
pub mod horn;
pub mod matrix;
pub mod par;
pub mod rat;
pub mod series;
pub mod trop;

pub use error::{Error, Result};
pub use expr::{Assignment, Expression, Variable};
pub use horn::{HornQuery, IndexTriple};
pub use matrix::{InvariantFactors, SeriesMatrix, SmithForm};
pub use rat::Q;
pub use series::{PuiseuxSeries, DEFAULT_PRECISION};
pub use trop::{GroupSpace, SpaceKind, TropPoint, VarietySpec};
