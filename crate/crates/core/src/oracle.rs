//! Monte Carlo check of the classical ensemble densities.
//!
//! Positions are drawn uniformly in time along the orbit: the mean anomaly is
//! uniform, Kepler's equation gives the eccentric anomaly, and the geometry of
//! the inclined ellipse gives `(r, theta)`. No equations of motion are
//! integrated, so the sampler is exact in distribution.
//!
//! The stream of samples is cut into fixed-size chunks. Chunk `k` draws from a
//! ChaCha8 generator seeded with `seed` on stream `k`, and chunk histograms
//! are merged by integer addition, so results do not depend on the number of
//! worker threads.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kepler::{self, Branch, OrbitEnsembleParams};

/// Samples per generator stream.
pub const CHUNK_SIZE: usize = 1 << 16;

const KEPLER_TOL: f64 = 1e-12;
const KEPLER_MAX_ITER: usize = 60;

/// Solves `u - e sin(u) = M (mod 2 pi)` for the eccentric anomaly `u` in `[0, 2 pi)`.
///
/// Newton's method from `M + e sin(M)`, kept inside a bracket and falling back
/// to bisection whenever a step leaves it. Valid for `0 <= e <= 1`.
pub fn solve_kepler(mean_anomaly: f64, eccentricity: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eccentricity) || !mean_anomaly.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Kepler solver needs finite M and e in [0, 1] (got M={mean_anomaly}, e={eccentricity})"
        )));
    }
    let m = mean_anomaly.rem_euclid(TAU);
    let residual = |u: f64| u - eccentricity * u.sin() - m;
    let (mut lo, mut hi) = (0.0, TAU);
    let mut u = (m + eccentricity * m.sin()).clamp(lo, hi);
    for _ in 0..KEPLER_MAX_ITER {
        let f = residual(u);
        if f.abs() < 0.1 * KEPLER_TOL {
            break;
        }
        if f < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let slope = 1.0 - eccentricity * u.cos();
        let step = u - f / slope;
        u = if slope > 0.0 && step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 4.0 * f64::EPSILON {
            break;
        }
    }
    let res = residual(u);
    if res.abs() >= KEPLER_TOL {
        return Err(Error::KeplerNonConvergence {
            mean_anomaly,
            eccentricity,
            residual: res,
        });
    }
    Ok(if u >= TAU { 0.0 } else { u })
}

/// How the in-plane orientation of each sampled orbit is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// Only the two orbit forms with the apsidal line through the highest point;
    /// reproduces the mean of the two branch densities.
    TwoBranch,
    /// An additional perihelion phase, uniform on `[0, 2 pi)`, is added.
    UniformPhase,
}

impl std::str::FromStr for PhaseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-branch" => Ok(Self::TwoBranch),
            "uniform-phase" => Ok(Self::UniformPhase),
            other => Err(Error::InvalidArgument(format!("unknown phase mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::TwoBranch => "two-branch",
            Self::UniformPhase => "uniform-phase",
        })
    }
}

/// One position drawn uniformly in time from the ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSample {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub branch: Branch,
    /// Eccentric anomaly.
    pub u: f64,
    /// Orbit-plane angle with `cos(theta) = sin(alpha) cos(gamma)`. NaN for
    /// `l = 0`, whose direction is drawn isotropically.
    pub gamma: f64,
}

/// Draw one position. The generator is advanced by exactly five uniforms per call.
pub fn sample_position<R: Rng + ?Sized>(
    params: &OrbitEnsembleParams,
    rng: &mut R,
    mode: PhaseMode,
) -> Result<OrbitSample> {
    let mean_anomaly = TAU * rng.gen::<f64>();
    let coin = rng.gen::<f64>();
    let extra = rng.gen::<f64>();
    let dir = rng.gen::<f64>();
    let phi = TAU * rng.gen::<f64>();

    let e = params.eccentricity;
    let u = solve_kepler(mean_anomaly, e)?;
    let r = params.radius_at(u);
    let branch = if coin < 0.5 { Branch::One } else { Branch::Two };

    let Ok(inc) = params.inclination() else {
        // l = 0: straight-line orbit, isotropic orientation
        let cos_theta = (2.0 * dir - 1.0).clamp(-1.0, 1.0);
        return Ok(OrbitSample {
            r,
            theta: cos_theta.acos(),
            phi,
            branch,
            u,
            gamma: f64::NAN,
        });
    };

    // true anomaly measured from perihelion
    let f = ((1.0 - e * e).sqrt() * u.sin()).atan2(u.cos() - e);
    let mut gamma = match branch {
        Branch::One => f + PI,
        Branch::Two => f,
    };
    if mode == PhaseMode::UniformPhase {
        gamma += TAU * extra;
    }
    let gamma = gamma.rem_euclid(TAU);
    let theta = (inc.sin_alpha * gamma.cos()).clamp(-1.0, 1.0).acos();
    Ok(OrbitSample {
        r,
        theta,
        phi,
        branch,
        u,
        gamma,
    })
}

/// Generator for chunk `chunk` of the stream identified by `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Sampling run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u64,
    pub phase_mode: PhaseMode,
    /// Worker threads; `None` uses the global pool. Has no effect on results.
    pub threads: Option<usize>,
}

impl SamplingConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            phase_mode: PhaseMode::TwoBranch,
            threads: None,
        }
    }

    pub fn with_phase_mode(mut self, mode: PhaseMode) -> Self {
        self.phase_mode = mode;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

/// Runs `visit` over every sample of every chunk and sums the per-chunk
/// accumulators in chunk order.
fn accumulate<A, F>(params: &OrbitEnsembleParams, cfg: &SamplingConfig, init: impl Fn() -> A + Sync, visit: F) -> Result<A>
where
    A: Send + Merge,
    F: Fn(&mut A, &OrbitSample) + Sync,
{
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let chunks = cfg.samples.div_ceil(CHUNK_SIZE);
    let run = || -> Result<A> {
        let parts: Result<Vec<A>> = (0..chunks)
            .into_par_iter()
            .map(|k| {
                let mut rng = chunk_rng(cfg.seed, k as u64);
                let len = CHUNK_SIZE.min(cfg.samples - k * CHUNK_SIZE);
                let mut acc = init();
                for _ in 0..len {
                    let s = sample_position(params, &mut rng, cfg.phase_mode)?;
                    visit(&mut acc, &s);
                }
                Ok(acc)
            })
            .collect();
        let mut parts = parts?.into_iter();
        let mut total = parts.next().expect("at least one chunk");
        for p in parts {
            total.merge(p);
        }
        Ok(total)
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

trait Merge {
    fn merge(&mut self, other: Self);
}

impl Merge for Vec<u64> {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

/// Moments accumulated for the time-average checks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SampleMoments {
    pub count: u64,
    pub sum_r: f64,
    pub sum_r_sq: f64,
    /// Sum of `du/dM = 1 / (1 - e cos u)`; its mean over time-uniform samples is 1.
    pub sum_weight: f64,
    pub sum_weight_sq: f64,
}

impl Merge for SampleMoments {
    fn merge(&mut self, o: Self) {
        self.count += o.count;
        self.sum_r += o.sum_r;
        self.sum_r_sq += o.sum_r_sq;
        self.sum_weight += o.sum_weight;
        self.sum_weight_sq += o.sum_weight_sq;
    }
}

impl SampleMoments {
    fn stats(sum: f64, sum_sq: f64, count: u64) -> (f64, f64) {
        let n = count as f64;
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0);
        (mean, (var / n).sqrt())
    }

    /// Sample mean of the radius and its standard error.
    pub fn mean_radius(&self) -> (f64, f64) {
        Self::stats(self.sum_r, self.sum_r_sq, self.count)
    }

    /// Sample mean of `1 / (1 - e cos u)` and its standard error.
    pub fn mean_weight(&self) -> (f64, f64) {
        Self::stats(self.sum_weight, self.sum_weight_sq, self.count)
    }
}

pub fn sample_moments(params: &OrbitEnsembleParams, cfg: &SamplingConfig) -> Result<SampleMoments> {
    let e = params.eccentricity;
    accumulate(params, cfg, SampleMoments::default, |acc, s| {
        let w = 1.0 / (1.0 - e * s.u.cos());
        acc.count += 1;
        acc.sum_r += s.r;
        acc.sum_r_sq += s.r * s.r;
        acc.sum_weight += w;
        acc.sum_weight_sq += w * w;
    })
}

/// Time-averaged mean radius of a Kepler ellipse, `n^2 (1 + e^2 / 2)`.
pub fn mean_radius_exact(params: &OrbitEnsembleParams) -> f64 {
    params.semi_major * (1.0 + 0.5 * params.eccentricity * params.eccentricity)
}

/// One-dimensional histogram normalized to unit area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn from_counts(edges: Vec<f64>, counts: Vec<u64>) -> Self {
        let total: u64 = counts.iter().sum();
        let density = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, w)| {
                if total == 0 {
                    0.0
                } else {
                    c as f64 / (total as f64 * (w[1] - w[0]))
                }
            })
            .collect();
        Self {
            edges,
            counts,
            density,
        }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    /// `sum density * width`; 1 for a non-empty histogram.
    pub fn mass(&self) -> f64 {
        (0..self.bins()).map(|i| self.density[i] * self.width(i)).sum()
    }
}

/// Uniform bin layout over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSpec {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl BinSpec {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 bins (got {bins})")));
        }
        if !(hi > lo) {
            return Err(Error::InvalidArgument(format!("empty bin range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, bins })
    }

    pub fn edges(&self) -> Vec<f64> {
        crate::hydrogen::uniform_grid(self.lo, self.hi, self.bins + 1)
    }

    /// Bin of `x`; values within rounding outside the range go to the end bins.
    pub fn index(&self, x: f64) -> usize {
        let t = (x - self.lo) / (self.hi - self.lo) * self.bins as f64;
        if t <= 0.0 {
            0
        } else {
            (t as usize).min(self.bins - 1)
        }
    }
}

/// Radial bin range: `[r_peri, r_apo]`, which is `[0, 2 n^2]` for `l = 0`.
pub fn radial_bin_spec(params: &OrbitEnsembleParams, bins: usize) -> Result<BinSpec> {
    BinSpec::new(params.r_peri, params.r_apo, bins)
}

pub fn angular_bin_spec(bins: usize) -> Result<BinSpec> {
    BinSpec::new(0.0, PI, bins)
}

pub fn histogram_radial(params: &OrbitEnsembleParams, bins: usize, cfg: &SamplingConfig) -> Result<Histogram> {
    let spec = radial_bin_spec(params, bins)?;
    let counts = accumulate(params, cfg, || vec![0u64; bins], |acc, s| {
        acc[spec.index(s.r)] += 1;
    })?;
    Ok(Histogram::from_counts(spec.edges(), counts))
}

pub fn histogram_angular(params: &OrbitEnsembleParams, bins: usize, cfg: &SamplingConfig) -> Result<Histogram> {
    let spec = angular_bin_spec(bins)?;
    let counts = accumulate(params, cfg, || vec![0u64; bins], |acc, s| {
        acc[spec.index(s.theta)] += 1;
    })?;
    Ok(Histogram::from_counts(spec.edges(), counts))
}

/// Joint `(r, theta)` histogram, counts stored row-major with `r` as the row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2d {
    pub r_edges: Vec<f64>,
    pub theta_edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `counts / (total * dr * dtheta)`.
    pub density: Vec<f64>,
}

impl Histogram2d {
    pub fn shape(&self) -> (usize, usize) {
        (self.r_edges.len() - 1, self.theta_edges.len() - 1)
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.shape().1 + j]
    }

    pub fn radial_marginal(&self) -> Histogram {
        let (nr, nt) = self.shape();
        let counts = (0..nr)
            .map(|i| (0..nt).map(|j| self.count(i, j)).sum())
            .collect();
        Histogram::from_counts(self.r_edges.clone(), counts)
    }

    pub fn angular_marginal(&self) -> Histogram {
        let (nr, nt) = self.shape();
        let counts = (0..nt)
            .map(|j| (0..nr).map(|i| self.count(i, j)).sum())
            .collect();
        Histogram::from_counts(self.theta_edges.clone(), counts)
    }

    /// Number of cells with at least one sample.
    pub fn occupied_cells(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

pub fn histogram_2d(
    params: &OrbitEnsembleParams,
    r_bins: usize,
    theta_bins: usize,
    cfg: &SamplingConfig,
) -> Result<Histogram2d> {
    let rs = radial_bin_spec(params, r_bins)?;
    let ts = angular_bin_spec(theta_bins)?;
    let counts = accumulate(params, cfg, || vec![0u64; r_bins * theta_bins], |acc, s| {
        acc[rs.index(s.r) * theta_bins + ts.index(s.theta)] += 1;
    })?;
    let total: u64 = counts.iter().sum();
    let cell = (rs.hi - rs.lo) / r_bins as f64 * (ts.hi - ts.lo) / theta_bins as f64;
    let density = counts
        .iter()
        .map(|&c| c as f64 / (total as f64 * cell))
        .collect();
    Ok(Histogram2d {
        r_edges: rs.edges(),
        theta_edges: ts.edges(),
        counts,
        density,
    })
}

/// Analytic probability of each radial bin of `edges`.
pub fn radial_bin_masses(params: &OrbitEnsembleParams, edges: &[f64]) -> Result<Vec<f64>> {
    edges
        .windows(2)
        .map(|w| kepler::radial_probability(params, w[0], w[1]))
        .collect()
}

/// Analytic probability of each polar-angle bin of `edges`.
pub fn angular_bin_masses(params: &OrbitEnsembleParams, edges: &[f64]) -> Result<Vec<f64>> {
    edges
        .windows(2)
        .map(|w| kepler::angular_probability(params, w[0], w[1]))
        .collect()
}

/// Bins to leave out of a comparison: the two end bins plus any bin holding
/// a singular support edge strictly inside it.
pub fn edge_bins(edges: &[f64], singular_points: &[f64]) -> Vec<usize> {
    let bins = edges.len() - 1;
    let mut out = vec![0, bins - 1];
    for &x in singular_points {
        for i in 0..bins {
            if edges[i] <= x && x <= edges[i + 1] {
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `sum_i |h_i - m_i / w_i| w_i` over bins not in `exclude`, where `m_i` is
/// the analytic probability of bin `i`.
pub fn l1_to_bin_masses(hist: &Histogram, masses: &[f64], exclude: &[usize]) -> f64 {
    (0..hist.bins())
        .filter(|i| !exclude.contains(i))
        .map(|i| (hist.density[i] * hist.width(i) - masses[i]).abs())
        .sum()
}

/// Empirical radial histogram against the analytic radial density.
pub fn radial_l1(params: &OrbitEnsembleParams, hist: &Histogram) -> Result<f64> {
    let masses = radial_bin_masses(params, &hist.edges)?;
    let exclude = edge_bins(&hist.edges, &[]);
    Ok(l1_to_bin_masses(hist, &masses, &exclude))
}

/// Empirical polar-angle histogram against the analytic two-branch mean.
pub fn angular_l1(params: &OrbitEnsembleParams, hist: &Histogram) -> Result<f64> {
    let masses = angular_bin_masses(params, &hist.edges)?;
    let (lo, hi) = params.angular_support();
    let singular: Vec<f64> = if params.m > 0 { vec![lo, hi] } else { Vec::new() };
    let exclude = edge_bins(&hist.edges, &singular);
    Ok(l1_to_bin_masses(hist, &masses, &exclude))
}
