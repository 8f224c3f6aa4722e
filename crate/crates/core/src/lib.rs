//! Eigenvalue regions of doubly stochastic matrices built from convex
//! combinations of permutation matrices.

pub mod error;
pub mod cli;
pub mod format;
pub mod permgroup;
pub mod region;
pub mod search;
pub mod spectra;

pub use error::{Error, Result};
