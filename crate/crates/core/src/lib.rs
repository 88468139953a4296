//! Semi-discrete unified transform method for linear evolution equations on the half-line.

pub mod dispersion;
pub mod error;
pub mod experiments;
pub mod model;
pub mod oracles;
pub mod smalltime;
pub mod solvers;
pub mod transforms;

pub use error::{Error, Result};
