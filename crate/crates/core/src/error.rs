use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid quantum numbers (n={n}, l={l}, m={m}): {reason}")]
    InvalidQuantumNumbers {
        n: i64,
        l: i64,
        m: i64,
        reason: &'static str,
    },

    #[error("{what} = {value} is outside the domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("angular ensemble quantities need l >= 1 (got l = 0)")]
    AngularUndefinedForL0,

    #[error("Kepler solver failed for M={mean_anomaly}, e={eccentricity} (residual {residual:e})")]
    KeplerNonConvergence {
        mean_anomaly: f64,
        eccentricity: f64,
        residual: f64,
    },

    #[error("quadrature failed: {reason}")]
    Quadrature { reason: String },

    #[error("grid is not uniform (step {first} vs {offending} at index {index})")]
    NonUniformGrid {
        first: f64,
        offending: f64,
        index: usize,
    },

    #[error("curves have disjoint domains [{a_lo}, {a_hi}] and [{b_lo}, {b_hi}]")]
    DisjointDomains {
        a_lo: f64,
        a_hi: f64,
        b_lo: f64,
        b_hi: f64,
    },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("ratio {ratio} does not give integer quantum numbers at n={n}")]
    NonIntegerRatio { ratio: String, n: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
