//! Numerical toolkit for the complex crown of the Siegel upper half-space
//! and its boundary resolution by a cone bundle over `Sp(n, R)`.

// `!(x > t)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conebundle;
pub mod crown;
pub mod error;
pub mod invariants;
pub mod json;
pub mod lagrangian;
pub mod matcore;
pub mod symplectic;

pub use error::{CrownError, Result};
