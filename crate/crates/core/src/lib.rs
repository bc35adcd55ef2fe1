//! Poisson-Newton formula for finite Dirichlet series.
//!
//! A finite Dirichlet series `f(s) = 1 + sum a_n exp(-lambda_n s)` carries two
//! measures that agree as distributions on the half line: one built from the
//! zeros of `f`, one from the frequencies of `-log f`. This crate computes both
//! sides, the discrepancy polynomial that closes the identity at the origin,
//! and the classical summation and explicit formulas that arise as special
//! cases.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod cramer;
pub mod discrepancy;
pub mod error;
pub mod freq;
pub mod numerics;
pub mod series;
pub mod summation;
pub mod testfn;
pub mod verify;
pub mod zeros;
pub mod zeta;

pub use config::NumericsConfig;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::FiniteDirichletSeries;
pub use testfn::TestFunction;
pub use zeros::{Divisor, DivisorEntry};
