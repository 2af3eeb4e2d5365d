//! Free-fermion Page curves.
//!
//! Covariance-matrix entanglement entropy for fermionic Gaussian states, the
//! random fermionic Gaussian (RFG) ensemble and its concentration bounds,
//! long-time-averaged entropy after a quench of period-2 tight-binding
//! chains, and a brute-force Fock-space oracle for small systems.
//!
//! Entropies are in bits throughout.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exact_oracle;
pub mod gaussian_state;
pub mod linalg;
pub mod page_curves;
pub mod parallel;
pub mod quench;
pub mod rfg;
pub mod rng;
pub mod stats;

pub mod cli;

pub use error::{Error, Result};
pub use gaussian_state::{CovarianceMatrix, SubsystemSelection};
pub use linalg::{HermitianMatrix, UnitaryMatrix, C64};

/// Crate version, stamped into result metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
