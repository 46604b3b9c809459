//! Numerics for quantum information: states, channels, entanglement criteria and
//! measures, channel capacities, optimal cloning and purification, graph codes,
//! and protocol simulations, in finite dimension and for Gaussian covariance
//! matrices.
//!
//! Everything is dense, double-precision, and deterministic. Sampling routines
//! take explicit seeds. All entropic quantities are in bits.
//!
//! Start with the `examples/` directory for a guided tour; each example is a
//! runnable program covering one capability area.

pub mod capacities;
pub mod channels;
pub mod cli;
pub mod cloning;
pub mod codes;
pub mod density;
pub mod error;
pub mod figures;
pub mod fileio;
pub mod gaussian;
pub mod mat;
pub mod measures;
pub mod protocols;
pub mod separability;
pub mod states;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use mat::{CMat, CVec};
