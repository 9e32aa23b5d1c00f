//! Numerical free multiplicative convolution, subordination and free
//! perpetuity solver.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cheb;
pub mod error;
pub mod measure;
pub mod mult_power;
pub mod nc_comb;
pub mod perpetuity;
pub mod quad;
pub mod subordination;
pub mod tails;
pub mod transforms;

pub use error::{Error, Result};
pub use measure::{builtin_law, Measure};
