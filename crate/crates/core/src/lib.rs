//! Rank bounds and Frobenius-trace statistics for Jacobians of curves over
//! function fields.

pub mod arith;
pub mod cli;
pub mod conductor;
pub mod curves;
pub mod error;
pub mod fibration;
pub mod nagao;
pub(crate) mod serial;
pub mod towers;

pub use error::{Error, Result};
