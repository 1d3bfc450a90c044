//! Exact symbolic summation toolkit.
//!
//! Discrete residues and summability of rational functions, residual forms
//! of hypergeometric terms under the modified Abramov–Petkovšek reduction,
//! minimal telescopers and prescopers, vanishing-sum certificates and
//! automorphisms of kernel submodules.

pub mod algebra;
pub mod apred;
pub mod automorphism;
mod error;
pub mod parallel;
pub mod ore;
pub mod ratsum;
pub mod telescope;
pub mod term;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
