//! Numerical laboratory for `Δ²u = h(x, u)` on the unit ball of `R^4`.
//!
//! Modules cover the nonlinearity catalog, explicit Green kernels, a radial
//! Newton solver with max-norm continuation, blow-up rescaling against the
//! Liouville bubble, Pohožaev bookkeeping and an explicit unbounded solution
//! with supercritical growth.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::too_many_arguments)]

pub mod acceptance;
pub mod banded;
pub mod blowup;
pub mod config;
pub mod continuation;
pub mod counterexample;
pub mod error;
pub mod green;
pub mod grid;
pub mod nonlinearity;
pub mod output;
pub mod pohozaev;
pub mod quadrature;
pub mod radial;
pub mod reports;
pub mod source;

pub use error::{Error, Result};
