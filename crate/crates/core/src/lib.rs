//! Hydrogen eigenstate densities next to the densities of the matching
//! ensemble of classical Kepler ellipses, with the tools to compare them.
//!
//! Everything is in atomic-style units, `a = hbar = m_e = 1`: radii are
//! `r / a`, radial and angular densities are dimensionless, and 3D densities
//! are in `a^-3`.

pub mod analysis;
pub mod error;
pub mod hydrogen;
pub mod kepler;
pub mod oracle;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use hydrogen::QuantumNumbers;
pub use kepler::OrbitEnsembleParams;
