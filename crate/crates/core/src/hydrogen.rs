//! Quantum probability densities of hydrogen eigenstates and of the harmonic
//! oscillator, in atomic-style units (`a = hbar = m_e = 1`).
//!
//! Radii are `r / a`, so radial densities are dimensionless and 3D densities
//! are in units of `a^-3`. Negative `m` is folded onto `|m|`: every density
//! here depends on `m` only through `P_l^{|m|}` squared.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_panels, QuadOptions};
use crate::specfun::{
    assoc_legendre_normalized_log, hermite_log, laguerre_log, log_factorial, LogScaledValue,
};

/// Validated `(n, l, m)` with `n >= 1`, `0 <= l < n`, `|m| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQuantumNumbers", into = "RawQuantumNumbers")]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    m: i32,
}

#[derive(Serialize, Deserialize)]
struct RawQuantumNumbers {
    n: i64,
    l: i64,
    m: i64,
}

impl TryFrom<RawQuantumNumbers> for QuantumNumbers {
    type Error = Error;

    fn try_from(raw: RawQuantumNumbers) -> Result<Self> {
        Self::new(raw.n, raw.l, raw.m)
    }
}

impl From<QuantumNumbers> for RawQuantumNumbers {
    fn from(q: QuantumNumbers) -> Self {
        Self {
            n: q.n.into(),
            l: q.l.into(),
            m: q.m.into(),
        }
    }
}

/// Largest principal quantum number accepted.
pub const MAX_N: i64 = 100_000;

impl QuantumNumbers {
    pub fn new(n: i64, l: i64, m: i64) -> Result<Self> {
        let fail = |reason| Error::InvalidQuantumNumbers { n, l, m, reason };
        if n < 1 {
            return Err(fail("n must be at least 1"));
        }
        if n > MAX_N {
            return Err(fail("n is too large"));
        }
        if l < 0 || l >= n {
            return Err(fail("l must satisfy 0 <= l <= n - 1"));
        }
        if m.abs() > l {
            return Err(fail("m must satisfy |m| <= l"));
        }
        Ok(Self {
            n: n as u32,
            l: l as u32,
            m: m as i32,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn abs_m(&self) -> u32 {
        self.m.unsigned_abs()
    }
}

impl std::fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(n={}, l={}, m={})", self.n, self.l, self.m)
    }
}

/// `E_n = -1 / (2 n^2)` in units of `hbar^2 / (m_e a^2)`.
pub fn energy(qn: QuantumNumbers) -> f64 {
    let n = f64::from(qn.n);
    -0.5 / (n * n)
}

/// Radial eigenfunction `R_nl(r)` in log-scaled form, units `a^-3/2`.
pub fn radial_wavefunction_log(qn: QuantumNumbers, r: f64) -> LogScaledValue {
    let (n, l) = (qn.n, qn.l);
    let nf = f64::from(n);
    let x = 2.0 * r / nf;
    if l > 0 && x == 0.0 {
        return LogScaledValue::ZERO;
    }
    let log_norm = 0.5
        * (3.0 * (2.0 / nf).ln() + log_factorial(u64::from(n - l - 1))
            - (2.0 * nf).ln()
            - log_factorial(u64::from(n + l)));
    let log_power = if l == 0 { 0.0 } else { f64::from(l) * x.ln() };
    let lag = laguerre_log(n - l - 1, f64::from(2 * l + 1), x);
    lag.scale_log(log_norm + log_power - r / nf)
}

pub fn radial_wavefunction(qn: QuantumNumbers, r: f64) -> f64 {
    radial_wavefunction_log(qn, r).to_real()
}

/// Dimensionless radial probability density `r^2 R_nl(r)^2`.
pub fn radial_density(qn: QuantumNumbers, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    radial_wavefunction_log(qn, r).square().scale_log(2.0 * r.ln()).to_real()
}

/// Angular probability density in the polar angle,
/// `2 pi |Y_l^m(theta)|^2 sin(theta)`, normalized on `[0, pi]`.
pub fn angular_density(qn: QuantumNumbers, theta: f64) -> f64 {
    let s = theta.sin();
    if s <= 0.0 {
        return 0.0;
    }
    assoc_legendre_normalized_log(qn.l, qn.abs_m(), theta.cos())
        .square()
        .scale_log((2.0 * PI).ln() + s.ln())
        .to_real()
}

/// `|psi_nlm(r, theta, phi)|^2` in `a^-3`; independent of `phi`.
pub fn density3d(qn: QuantumNumbers, r: f64, theta: f64) -> f64 {
    let radial = radial_wavefunction_log(qn, r).square();
    let angular = assoc_legendre_normalized_log(qn.l, qn.abs_m(), theta.cos()).square();
    (radial * angular).to_real()
}

/// `|psi_n(x)|^2` for the oscillator eigenstate
/// `psi_n = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2)`, `x` in units of `sqrt(hbar / (m omega))`.
pub fn oscillator_quantum_density(n: u32, x: f64) -> f64 {
    let log_norm =
        f64::from(n) * std::f64::consts::LN_2 + log_factorial(u64::from(n)) + 0.5 * PI.ln();
    hermite_log(n, x)
        .square()
        .scale_log(-x * x - log_norm)
        .to_real()
}

/// Radius beyond which the radial density carries negligible mass.
pub fn radial_upper_limit(n: u32) -> f64 {
    let nf = f64::from(n);
    4.0 * nf * nf + 40.0 * nf + 40.0
}

/// Default radial grid end, `2.2 n^2`: classical support plus a 10% margin.
pub fn default_r_max(n: u32) -> f64 {
    let nf = f64::from(n);
    2.2 * nf * nf
}

/// `[0, r_max]` sampled at `points` uniformly spaced radii.
pub fn radial_grid(r_max: f64, points: usize) -> Vec<f64> {
    uniform_grid(0.0, r_max, points)
}

pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

fn radial_panels(qn: QuantumNumbers, lo: f64, hi: f64) -> usize {
    let span = (hi - lo) / radial_upper_limit(qn.n);
    ((2 * (qn.n - qn.l) + 8) as f64 * span).ceil().max(1.0) as usize
}

/// `int_lo^hi r^2 R_nl^2 dr` by panelled adaptive quadrature.
pub fn radial_probability(qn: QuantumNumbers, lo: f64, hi: f64) -> Result<f64> {
    let opts = QuadOptions::tolerances(1e-13, 1e-11);
    integrate_panels(
        |r| radial_density(qn, r),
        lo,
        hi,
        radial_panels(qn, lo, hi),
        &opts,
    )
    .map(|r| r.value)
}

/// Total radial probability; 1 up to quadrature error for a correct wavefunction.
pub fn radial_norm(qn: QuantumNumbers) -> Result<f64> {
    radial_probability(qn, 0.0, radial_upper_limit(qn.n))
}

/// `int_0^pi angular_density dtheta`.
pub fn angular_norm(qn: QuantumNumbers) -> Result<f64> {
    let panels = (qn.l as usize + 4).max(4);
    integrate_panels(
        |t| angular_density(qn, t),
        0.0,
        PI,
        panels,
        &QuadOptions::tolerances(1e-14, 1e-12),
    )
    .map(|r| r.value)
}

/// `int |psi_n|^2 dx` over the full line (tails beyond the turning points + 12 dropped).
pub fn oscillator_norm(n: u32) -> Result<f64> {
    let edge = (2.0 * f64::from(n) + 1.0).sqrt() + 12.0;
    integrate(
        |x| oscillator_quantum_density(n, x),
        -edge,
        edge,
        &QuadOptions::tolerances(1e-14, 1e-12),
    )
    .map(|r| r.value)
}
