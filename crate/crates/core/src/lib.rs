//! Global minimization of functions satisfying the Vanderbei condition
//!
//! ```text
//! |f(x) - f(y)| <= L(eta) * ||x - y|| + eta    for every eta > 0
//! ```
//!
//! on an axis-aligned box. Two non-uniform covering solvers are provided:
//!
//! - [`cover::solve_cover`]: sequential corner-split covering with a
//!   record-driven adaptive step and four list traversal schemes.
//! - [`bnb::solve_bnb`]: best-first branch and bound that discards, bisects,
//!   or cuts out a ball-inscribed box and tiles the remainder.
//!
//! Both return an `eps`-optimal point when they terminate normally. The
//! [`testfns`] module ships four non-Lipschitz benchmark problems and
//! [`oracle`] a brute-force grid minimizer used to check results.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bnb;
pub mod cover;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod result;
pub mod testfns;
pub mod vanderbei;

pub use bnb::{solve_bnb, BnbConfig, BnbOp};
pub use cover::{solve_cover, CoverConfig, TraversalScheme};
pub use error::{Error, Result};
pub use geometry::HyperRectangle;
pub use result::{RunResult, RunStatus, Trace};
pub use testfns::TestProblemId;
pub use vanderbei::{CoveringNorm, Problem, VanderbeiModulus};
