//! Exact and high-precision tooling around Euler's reduction of odd-weight
//! double zeta values and the closed formulas for the inverse of its
//! coefficient matrix `A_K`.
//!
//! - [`exact`]: canonical big rationals and binomial conventions
//! - [`bernoulli`]: exact Bernoulli numbers (`B_1 = -1/2`)
//! - [`series`]: truncated power series and the identity checkers built on them
//! - [`matrix`], [`zagier`]: `A`, `B`, `C`, `P`, `Q` and their exact verification
//! - [`reductions`]: coefficient tables for the zeta reductions
//! - [`numerics`]: fixed-point values with rigorous error bounds and the numeric audits
//! - [`export`]: JSON/CSV surfaces and their schema checks

pub mod bernoulli;
pub mod error;
pub mod exact;
pub mod export;
pub mod matrix;
pub mod numerics;
pub mod reductions;
pub mod series;
pub mod zagier;

pub use bernoulli::{bernoulli_number, bernoulli_range, BernoulliCache};
pub use error::{Error, Result};
pub use exact::{binomial, factorial, ExactRational};
pub use matrix::RationalMatrix;
pub use series::TruncatedSeries;
