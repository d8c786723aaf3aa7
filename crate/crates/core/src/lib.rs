//! Discrete fractional boundary value problems
//!
//! ```text
//! Δ^α y(t) + q(t+α-1) f(y(t+α-1)) = 0,   t = 0, ..., b+1,
//! y(α-2) = y(α+b+1) = 0,                 1 < α ≤ 2,  b ≥ 2,
//! ```
//!
//! with the fractional operators, the Green's function, a fixed-point solver
//! and Lyapunov-type inequality certificates built on top of it.

// NaN must fail these guards, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod expr;
pub mod fracops;
pub mod green;
pub mod linalg;
pub mod lyapunov;
pub mod problem_file;
pub mod reproduce;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
