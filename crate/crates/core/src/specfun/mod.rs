//! Orthogonal polynomials and factorial normalizations evaluated without
//! overflow up to degrees of order 1000.
//!
//! All functions are pure. The `_log` variants return a [`LogScaledValue`] so
//! callers can combine them with factorial ratios before exponentiating.

mod factorial;
mod hermite;
mod laguerre;
mod legendre;
mod log_scaled;

pub use factorial::log_factorial;
pub use hermite::hermite_log;
pub use laguerre::{laguerre, laguerre_log};
pub use legendre::{assoc_legendre_normalized, assoc_legendre_normalized_log};
pub use log_scaled::LogScaledValue;
