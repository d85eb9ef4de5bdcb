//! Quantitative quantum-versus-classical comparisons: smoothing of the quantum
//! oscillations, curve distances, envelope and mass checks, fixed-ratio
//! convergence tables, and the `R_n0` versus `R_n1` small-angular-momentum
//! limit.
//!
//! Classical densities diverge integrably at turning points, so every metric
//! here drops a window of [`EDGE_FRACTION`] of the support width at each edge.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hydrogen::{self, QuantumNumbers};
use crate::kepler::{self, OrbitEnsembleParams};
use crate::quadrature::trapezoid;
use crate::specfun::log_factorial;

/// Fraction of the support width excluded at each edge in metric computations.
pub const EDGE_FRACTION: f64 = 0.05;

/// Allowed deviation of a probability curve's trapezoid integral from 1 before it is flagged.
pub const NORMALIZATION_DRIFT_LIMIT: f64 = 0.02;

/// Default grid size for radial and angular curves.
pub const DEFAULT_POINTS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Quantum,
    Classical,
    Smoothed,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub units: String,
}

impl CurveMeta {
    pub fn new(qn: QuantumNumbers, units: impl Into<String>) -> Self {
        Self {
            n: qn.n(),
            l: qn.l(),
            m: qn.m(),
            units: units.into(),
        }
    }
}

/// A density sampled on an ascending grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    pub kind: CurveKind,
    pub meta: CurveMeta,
    /// Trapezoid integral recorded at construction.
    pub integral: f64,
}

impl DensityCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, kind: CurveKind, meta: CurveMeta) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidCurve(format!(
                "grid has {} points but values has {}",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 2 {
            return Err(Error::InvalidCurve("need at least two grid points".into()));
        }
        if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidCurve(format!("grid not strictly ascending at index {i}")));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidCurve(format!(
                "value {} at index {i} is negative or not finite",
                values[i]
            )));
        }
        let integral = trapezoid(&grid, &values);
        Ok(Self {
            grid,
            values,
            kind,
            meta,
            integral,
        })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn(
        grid: Vec<f64>,
        kind: CurveKind,
        meta: CurveMeta,
        f: impl Fn(f64) -> f64 + Sync,
    ) -> Result<Self> {
        let values = grid.par_iter().map(|&x| f(x)).collect();
        Self::new(grid, values, kind, meta)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    /// `|integral - 1|`.
    pub fn normalization_drift(&self) -> f64 {
        (self.integral - 1.0).abs()
    }

    /// True when the curve is meant to be a probability density but its
    /// integral is off by more than [`NORMALIZATION_DRIFT_LIMIT`].
    pub fn is_flagged(&self) -> bool {
        self.normalization_drift() > NORMALIZATION_DRIFT_LIMIT
    }

    /// Step of a uniform grid, or an error naming the first offending step.
    pub fn uniform_step(&self) -> Result<f64> {
        let (lo, hi) = self.domain();
        let step = (hi - lo) / (self.grid.len() - 1) as f64;
        let tol = 1e-9 * (hi - lo).abs().max(1.0);
        for (i, w) in self.grid.windows(2).enumerate() {
            if ((w[1] - w[0]) - step).abs() > tol {
                return Err(Error::NonUniformGrid {
                    first: step,
                    offending: w[1] - w[0],
                    index: i,
                });
            }
        }
        Ok(step)
    }

    /// Linear interpolation; zero outside the domain.
    pub fn interpolate(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return 0.0;
        }
        let i = self.grid.partition_point(|&g| g <= x);
        if i == 0 {
            return self.values[0];
        }
        if i >= self.grid.len() {
            return self.values[self.grid.len() - 1];
        }
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        let t = (x - x0) / (x1 - x0);
        self.values[i - 1] * (1.0 - t) + self.values[i] * t
    }

    fn with_values(&self, values: Vec<f64>, kind: CurveKind) -> Result<Self> {
        Self::new(self.grid.clone(), values, kind, self.meta.clone())
    }
}

/// Local WKB wavenumber of the radial motion, floored at `k_min`. In the
/// classically forbidden region the decay rate `sqrt(-k^2)` is returned.
pub fn wkb_wavenumber(params: &OrbitEnsembleParams, r: f64, k_min: f64) -> f64 {
    let nf = params.n_f64();
    let k_sq = 2.0 / r - 1.0 / (nf * nf) - params.ell_sq / (r * r);
    if k_sq.is_nan() {
        return k_min;
    }
    k_sq.abs().max(k_min * k_min).sqrt()
}

const K_MIN: f64 = 1e-12;
const KERNEL_CUTOFF: f64 = 6.0;
const BALANCE_TOL: f64 = 1e-14;
const BALANCE_MAX_ITER: usize = 20_000;

/// Smoothing width at `r`: half the local oscillation period, clamped.
pub fn smoothing_width(params: &OrbitEnsembleParams, r: f64, step: f64) -> f64 {
    let max_sigma = (params.support_width() / 10.0).max(3.0 * step);
    if r > 0.0 {
        (0.5 * PI / wkb_wavenumber(params, r, K_MIN)).clamp(3.0 * step, max_sigma)
    } else {
        3.0 * step
    }
}

/// Banded symmetric kernel `K[i][j]` stored row by row from column `start[i]`.
struct BandKernel {
    start: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl BandKernel {
    /// Gaussian with pair width `(s_i^2 + s_j^2) / 2`, cut at [`KERNEL_CUTOFF`] widths.
    fn new(grid: &[f64], sigma: &[f64]) -> Self {
        let len = grid.len();
        let h = grid[1] - grid[0];
        let s_max = sigma.iter().copied().fold(0.0, f64::max);
        let (start, rows) = (0..len)
            .into_par_iter()
            .map(|i| {
                let reach = KERNEL_CUTOFF * ((sigma[i].powi(2) + s_max.powi(2)) / 2.0).sqrt();
                let span = (reach / h).ceil() as usize;
                let lo = i.saturating_sub(span);
                let hi = (i + span).min(len - 1);
                let inside = |j: usize| {
                    let s2 = sigma[i].powi(2) + sigma[j].powi(2);
                    (grid[i] - grid[j]).powi(2) <= 0.5 * KERNEL_CUTOFF * KERNEL_CUTOFF * s2
                };
                let lo = (lo..=i).find(|&j| inside(j)).unwrap_or(i);
                let hi = (i..=hi).rev().find(|&j| inside(j)).unwrap_or(i);
                let row = (lo..=hi)
                    .map(|j| {
                        if !inside(j) {
                            return 0.0;
                        }
                        let s2 = sigma[i].powi(2) + sigma[j].powi(2);
                        let d2 = (grid[i] - grid[j]).powi(2);
                        (2.0 * sigma[i] * sigma[j] / s2).sqrt() * (-d2 / s2).exp()
                    })
                    .collect();
                (lo, row)
            })
            .unzip();
        Self { start, rows }
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows
            .par_iter()
            .zip(&self.start)
            .map(|(row, &lo)| row.iter().zip(&v[lo..]).map(|(k, x)| k * x).sum())
            .collect()
    }
}

/// Gaussian smoothing with a width that follows the local quantum oscillation.
///
/// The width is `sigma(r) = pi / (2 k(r))`, half the local period `pi / k` of
/// the density oscillation, clamped to `[3 h, support_width / 10]`. The
/// symmetric kernel is balanced (symmetric Sinkhorn scaling) against the
/// trapezoid weights so that its rows and columns both sum to one: constants
/// are reproduced up to the domain edges and mass is conserved locally, so no
/// global rescaling distorts the bulk.
pub fn smooth(curve: &DensityCurve, params: &OrbitEnsembleParams) -> Result<DensityCurve> {
    let h = curve.uniform_step()?;
    let grid = curve.grid();
    let values = curve.values();
    let len = grid.len();
    let weights: Vec<f64> = (0..len)
        .map(|j| if j == 0 || j + 1 == len { 0.5 * h } else { h })
        .collect();
    let sigma: Vec<f64> = grid.iter().map(|&r| smoothing_width(params, r, h)).collect();
    let kernel = BandKernel::new(grid, &sigma);

    // Find d > 0 with d_i * sum_j K_ij w_j d_j = 1.
    let mut d = vec![1.0; len];
    let mut converged = false;
    for _ in 0..BALANCE_MAX_ITER {
        let wd: Vec<f64> = d.iter().zip(&weights).map(|(a, b)| a * b).collect();
        let kd = kernel.apply(&wd);
        let residual = d
            .iter()
            .zip(&kd)
            .map(|(a, b)| (a * b - 1.0).abs())
            .fold(0.0, f64::max);
        if residual < BALANCE_TOL {
            converged = true;
            break;
        }
        d.iter_mut().zip(&kd).for_each(|(a, b)| *a = (*a / b).sqrt());
    }
    if !converged {
        return Err(Error::InvalidCurve(
            "smoothing kernel balancing did not converge".into(),
        ));
    }

    let wdf: Vec<f64> = (0..len).map(|j| weights[j] * d[j] * values[j]).collect();
    let out: Vec<f64> = kernel
        .apply(&wdf)
        .into_iter()
        .zip(&d)
        .map(|(v, di)| v * di)
        .collect();

    // Removes the residual of the balancing, at the 1e-14 level.
    let mass_in = trapezoid(grid, values);
    let mass_out = trapezoid(grid, &out);
    let scale = if mass_out > 0.0 { mass_in / mass_out } else { 1.0 };
    let out = out.into_iter().map(|v| (v * scale).max(0.0)).collect();
    curve.with_values(out, CurveKind::Smoothed)
}

/// Sub-interval used for metrics: the domain with [`EDGE_FRACTION`] of the
/// support width removed at each edge.
pub fn edge_window(support: (f64, f64)) -> (f64, f64) {
    let w = support.1 - support.0;
    (support.0 + EDGE_FRACTION * w, support.1 - EDGE_FRACTION * w)
}

fn aligned_values(f: &DensityCurve, g: &DensityCurve) -> Result<Vec<f64>> {
    let (a_lo, a_hi) = f.domain();
    let (b_lo, b_hi) = g.domain();
    if a_hi < b_lo || b_hi < a_lo {
        return Err(Error::DisjointDomains {
            a_lo,
            a_hi,
            b_lo,
            b_hi,
        });
    }
    if f.grid() == g.grid() {
        Ok(g.values().to_vec())
    } else {
        Ok(f.grid().iter().map(|&x| g.interpolate(x)).collect())
    }
}

fn windowed<'a>(
    grid: &'a [f64],
    window: Option<(f64, f64)>,
) -> impl Iterator<Item = usize> + 'a {
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    (0..grid.len()).filter(move |&i| grid[i] >= lo && grid[i] <= hi)
}

/// `int |f - g|` by the trapezoid rule on `f`'s grid (`g` linearly
/// interpolated when the grids differ), restricted to `window` if given.
pub fn l1_distance(f: &DensityCurve, g: &DensityCurve, window: Option<(f64, f64)>) -> Result<f64> {
    let gv = aligned_values(f, g)?;
    let idx: Vec<usize> = windowed(f.grid(), window).collect();
    let xs: Vec<f64> = idx.iter().map(|&i| f.grid()[i]).collect();
    let ds: Vec<f64> = idx.iter().map(|&i| (f.values()[i] - gv[i]).abs()).collect();
    Ok(trapezoid(&xs, &ds))
}

/// `max |f - g|` over the grid points in `window`.
pub fn linf_distance(f: &DensityCurve, g: &DensityCurve, window: Option<(f64, f64)>) -> Result<f64> {
    let gv = aligned_values(f, g)?;
    Ok(windowed(f.grid(), window)
        .map(|i| (f.values()[i] - gv[i]).abs())
        .fold(0.0, f64::max))
}

/// Interior local maxima of `f` on `[lo, hi]`, located on a grid of `points`
/// and refined by golden-section search.
pub fn local_maxima(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let grid = hydrogen::uniform_grid(lo, hi, points.max(3));
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut peaks = Vec::new();
    for i in 1..grid.len() - 1 {
        if vals[i] > vals[i - 1] && vals[i] >= vals[i + 1] && vals[i] > 0.0 {
            peaks.push(golden_max(&f, grid[i - 1], grid[i + 1]));
        }
    }
    peaks
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() <= 1e-12 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Ratio of a quantum density to twice the classical one at the quantum peaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    /// `(peak position, p_q / (2 p_c))`.
    pub peaks: Vec<(f64, f64)>,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub window: (f64, f64),
}

/// Envelope test for an arbitrary quantum/classical pair on `window`.
pub fn envelope_ratios(
    quantum: impl Fn(f64) -> f64,
    classical: impl Fn(f64) -> f64,
    window: (f64, f64),
    points: usize,
) -> EnvelopeReport {
    let peaks: Vec<(f64, f64)> = local_maxima(&quantum, window.0, window.1, points)
        .into_iter()
        .filter_map(|x| {
            let c = classical(x);
            (c > 0.0).then(|| (x, quantum(x) / (2.0 * c)))
        })
        .collect();
    let ratios = peaks.iter().map(|p| p.1);
    let count = peaks.len().max(1) as f64;
    EnvelopeReport {
        mean_ratio: ratios.clone().sum::<f64>() / count,
        max_ratio: ratios.clone().fold(f64::NEG_INFINITY, f64::max),
        min_ratio: ratios.fold(f64::INFINITY, f64::min),
        peaks,
        window,
    }
}

/// Envelope check of `p_q` against `2 p_c` over the interior of the classical
/// radial support.
pub fn envelope_check(qn: QuantumNumbers) -> Result<EnvelopeReport> {
    let params = kepler::make_params(qn);
    let window = edge_window((params.r_peri, params.r_apo));
    let points = DEFAULT_POINTS.max(60 * (qn.n() - qn.l()) as usize);
    Ok(envelope_ratios(
        |r| hydrogen::radial_density(qn, r),
        |r| kepler::radial_density(&params, r).unwrap_or(0.0),
        window,
        points,
    ))
}

/// Envelope check for the oscillator warm-up between its turning points.
pub fn oscillator_envelope_check(n: u32) -> EnvelopeReport {
    let tp = kepler::oscillator_turning_point(n);
    envelope_ratios(
        |x| hydrogen::oscillator_quantum_density(n, x),
        |x| kepler::oscillator_classical_density(n, x),
        edge_window((-tp, tp)),
        DEFAULT_POINTS,
    )
}

/// Fraction of the quantum radial probability inside the classical support.
pub fn mass_in_support(qn: QuantumNumbers) -> Result<f64> {
    let params = kepler::make_params(qn);
    let inside = hydrogen::radial_probability(qn, params.r_peri, params.r_apo)?;
    let total = hydrogen::radial_norm(qn)?;
    Ok(inside / total)
}

/// The same fraction for the classical ensemble; 1 up to quadrature error.
pub fn classical_mass_in_support(params: &OrbitEnsembleParams) -> Result<f64> {
    kepler::radial_norm(params)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakAlignment {
    pub quantum_peak: f64,
    pub classical_feature: f64,
    /// `(quantum_peak - classical_feature) / support_width`.
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub qn: QuantumNumbers,
    pub l1: f64,
    pub linf: f64,
    pub mass_in_classical_support: f64,
    pub peak_alignment: Vec<PeakAlignment>,
    pub window: (f64, f64),
}

/// Radial curves on `[0, r_max]`: quantum, classical and smoothed quantum.
#[derive(Debug, Clone)]
pub struct RadialCurves {
    pub params: OrbitEnsembleParams,
    pub quantum: DensityCurve,
    pub classical: DensityCurve,
    pub smoothed: DensityCurve,
}

pub fn radial_curves(qn: QuantumNumbers, r_max: f64, points: usize) -> Result<RadialCurves> {
    let params = kepler::make_params(qn);
    let grid = hydrogen::radial_grid(r_max, points);
    let meta = CurveMeta::new(qn, "r in a; density dimensionless (p(r) a)");
    let quantum = DensityCurve::from_fn(grid.clone(), CurveKind::Quantum, meta.clone(), |r| {
        hydrogen::radial_density(qn, r)
    })?;
    let classical = DensityCurve::from_fn(grid, CurveKind::Classical, meta, |r| {
        if r > 0.0 {
            kepler::radial_density(&params, r).unwrap_or(0.0)
        } else {
            0.0
        }
    })?;
    let smoothed = smooth(&quantum, &params)?;
    Ok(RadialCurves {
        params,
        quantum,
        classical,
        smoothed,
    })
}

/// Innermost and outermost local maxima of `p_q` against the turning points.
pub fn apsis_alignment(qn: QuantumNumbers, r_max: f64) -> Vec<PeakAlignment> {
    let params = kepler::make_params(qn);
    let points = DEFAULT_POINTS.max(60 * (qn.n() - qn.l()) as usize);
    let peaks = local_maxima(|r| hydrogen::radial_density(qn, r), 0.0, r_max, points);
    let width = params.support_width();
    let mut out = Vec::new();
    if let (Some(&first), Some(&last)) = (peaks.first(), peaks.last()) {
        if qn.l() > 0 {
            out.push(PeakAlignment {
                quantum_peak: first,
                classical_feature: params.r_peri,
                offset: (first - params.r_peri) / width,
            });
        }
        out.push(PeakAlignment {
            quantum_peak: last,
            classical_feature: params.r_apo,
            offset: (last - params.r_apo) / width,
        });
    }
    out
}

/// Smoothed quantum radial density against the classical one.
pub fn radial_report(qn: QuantumNumbers, points: usize) -> Result<ComparisonReport> {
    let curves = radial_curves(qn, hydrogen::default_r_max(qn.n()), points)?;
    radial_report_from(qn, &curves)
}

/// [`radial_report`] for curves already on a grid.
pub fn radial_report_from(qn: QuantumNumbers, curves: &RadialCurves) -> Result<ComparisonReport> {
    let window = edge_window((curves.params.r_peri, curves.params.r_apo));
    Ok(ComparisonReport {
        qn,
        l1: l1_distance(&curves.smoothed, &curves.classical, Some(window))?,
        linf: linf_distance(&curves.smoothed, &curves.classical, Some(window))?,
        mass_in_classical_support: mass_in_support(qn)?,
        peak_alignment: apsis_alignment(qn, curves.quantum.domain().1),
        window,
    })
}

/// Angular curves on `[0, pi]`.
pub fn angular_curves(qn: QuantumNumbers, points: usize) -> Result<(DensityCurve, DensityCurve)> {
    let params = kepler::make_params(qn);
    let grid = hydrogen::uniform_grid(0.0, PI, points);
    let meta = CurveMeta::new(qn, "theta in rad; density per rad");
    let quantum = DensityCurve::from_fn(grid.clone(), CurveKind::Quantum, meta.clone(), |t| {
        hydrogen::angular_density(qn, t)
    })?;
    let classical = DensityCurve::from_fn(grid, CurveKind::Classical, meta, |t| {
        kepler::angular_density(&params, t).unwrap_or(0.0)
    })?;
    Ok((quantum, classical))
}

/// Raw quantum polar-angle density against the classical two-branch mean.
pub fn angular_report(qn: QuantumNumbers, points: usize) -> Result<ComparisonReport> {
    let (quantum, classical) = angular_curves(qn, points)?;
    angular_report_from(qn, &quantum, &classical)
}

/// [`angular_report`] for curves already on a grid.
pub fn angular_report_from(
    qn: QuantumNumbers,
    quantum: &DensityCurve,
    classical: &DensityCurve,
) -> Result<ComparisonReport> {
    let params = kepler::make_params(qn);
    let window = edge_window(params.angular_support());
    let (lo, hi) = params.angular_support();
    let inside: f64 = {
        let idx: Vec<usize> = windowed(quantum.grid(), Some((lo, hi))).collect();
        let xs: Vec<f64> = idx.iter().map(|&i| quantum.grid()[i]).collect();
        let ys: Vec<f64> = idx.iter().map(|&i| quantum.values()[i]).collect();
        trapezoid(&xs, &ys) / quantum.integral
    };
    Ok(ComparisonReport {
        qn,
        l1: l1_distance(quantum, classical, Some(window))?,
        linf: linf_distance(quantum, classical, Some(window))?,
        mass_in_classical_support: inside.clamp(0.0, 1.0),
        peak_alignment: Vec::new(),
        window,
    })
}

/// Quantum polar-angle density against the uniform-phase classical density,
/// over the same edge window as [`angular_report`].
pub fn angular_uniform_phase_l1(qn: QuantumNumbers, points: usize) -> Result<f64> {
    let params = kepler::make_params(qn);
    let (quantum, two_branch) = angular_curves(qn, points)?;
    let uniform = DensityCurve::from_fn(
        quantum.grid().to_vec(),
        CurveKind::Classical,
        two_branch.meta.clone(),
        |t| kepler::angular_density_uniform_phase(&params, t).unwrap_or(0.0),
    )?;
    l1_distance(&quantum, &uniform, Some(edge_window(params.angular_support())))
}

/// Positive rational `num / den` used to fix `l/n` or `m/l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u32,
    pub den: u32,
}

impl Ratio {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("ratio denominator is zero".into()));
        }
        Ok(Self { num, den })
    }

    /// `k * num / den` when it is an integer.
    pub fn apply(&self, k: u32) -> Option<u32> {
        let prod = u64::from(k) * u64::from(self.num);
        prod.is_multiple_of(u64::from(self.den)).then(|| (prod / u64::from(self.den)) as u32)
    }
}

impl std::str::FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse ratio '{s}' (expected p/q)"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Self::new(num, den)
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub qn: QuantumNumbers,
    pub radial: ComparisonReport,
    pub angular: ComparisonReport,
    /// Angular L1 against the uniform-perihelion-phase density; reported only.
    pub angular_uniform_phase_l1: f64,
}

/// Quantum numbers along a fixed `l/n`, `m/l` family.
pub fn family(ratio_l: Ratio, ratio_m: Option<Ratio>, n_list: &[u32]) -> Result<Vec<QuantumNumbers>> {
    n_list
        .iter()
        .map(|&n| {
            let l = ratio_l.apply(n).ok_or_else(|| Error::NonIntegerRatio {
                ratio: format!("l/n = {ratio_l}"),
                n,
            })?;
            let m = match ratio_m {
                Some(r) => r.apply(l).ok_or_else(|| Error::NonIntegerRatio {
                    ratio: format!("m/l = {r}"),
                    n,
                })?,
                None => 0,
            };
            QuantumNumbers::new(n.into(), l.into(), m.into())
        })
        .collect()
}

/// Radial and angular reports for each `n`, in input order.
pub fn convergence_study(
    ratio_l: Ratio,
    ratio_m: Option<Ratio>,
    n_list: &[u32],
    points: usize,
) -> Result<Vec<ConvergenceRow>> {
    let qns = family(ratio_l, ratio_m, n_list)?;
    qns.par_iter()
        .map(|&qn| {
            Ok(ConvergenceRow {
                qn,
                radial: radial_report(qn, points)?,
                angular: angular_report(qn, points)?,
                angular_uniform_phase_l1: angular_uniform_phase_l1(qn, points)?,
            })
        })
        .collect()
}

/// True when every element is strictly below its predecessor.
pub fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

pub fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularLimitRow {
    pub n: u32,
    /// `||r R_n0 - r R_n1||_2 / ||r R_n0||_2` on `[0, 2.2 n^2]`, signs aligned at the main peak.
    pub distance: f64,
    pub r_times_r_n0_sign_flipped: bool,
    pub r_times_r_n1_sign_flipped: bool,
    pub r_n0_at_origin: f64,
    pub r_n1_at_origin: f64,
    /// L1 distance of the `(n, 1, 0)` polar density from isotropy; reported only.
    pub angular_l1_vs_isotropic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularLimitReport {
    pub rows: Vec<SingularLimitRow>,
    pub strictly_decreasing: bool,
}

/// `r R_nl(r)` on a grid with the sign chosen positive at the largest `|value|`.
pub fn signed_radial_curve(qn: QuantumNumbers, grid: &[f64]) -> (Vec<f64>, bool) {
    let mut ys: Vec<f64> = grid
        .par_iter()
        .map(|&r| r * hydrogen::radial_wavefunction(qn, r))
        .collect();
    let peak = ys
        .iter()
        .copied()
        .fold(0.0f64, |acc, y| if y.abs() > acc.abs() { y } else { acc });
    let flip = peak < 0.0;
    if flip {
        ys.iter_mut().for_each(|y| *y = -*y);
    }
    (ys, flip)
}

/// Distance between `r R_n0` and `r R_n1` for each `n` in `n_list`.
pub fn singular_limit_study(n_list: &[u32], points: usize) -> Result<SingularLimitReport> {
    if let Some(&n) = n_list.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!(
            "singular-limit study needs n >= 2 (got {n})"
        )));
    }
    if n_list.len() < 2 {
        return Err(Error::InvalidArgument(
            "singular-limit study needs at least two n values".into(),
        ));
    }
    let rows: Result<Vec<SingularLimitRow>> = n_list
        .par_iter()
        .map(|&n| {
            let q0 = QuantumNumbers::new(n.into(), 0, 0)?;
            let q1 = QuantumNumbers::new(n.into(), 1, 0)?;
            let grid = hydrogen::radial_grid(hydrogen::default_r_max(n), points);
            let (y0, f0) = signed_radial_curve(q0, &grid);
            let (y1, f1) = signed_radial_curve(q1, &grid);
            let diff: Vec<f64> = y0.iter().zip(&y1).map(|(a, b)| (a - b).powi(2)).collect();
            let base: Vec<f64> = y0.iter().map(|a| a * a).collect();
            let distance = (trapezoid(&grid, &diff) / trapezoid(&grid, &base)).sqrt();
            let (quantum, _) = angular_curves(q1, points)?;
            let iso = DensityCurve::from_fn(
                quantum.grid().to_vec(),
                CurveKind::Classical,
                quantum.meta.clone(),
                |t| 0.5 * t.sin(),
            )?;
            Ok(SingularLimitRow {
                n,
                distance,
                r_times_r_n0_sign_flipped: f0,
                r_times_r_n1_sign_flipped: f1,
                r_n0_at_origin: hydrogen::radial_wavefunction(q0, 0.0),
                r_n1_at_origin: hydrogen::radial_wavefunction(q1, 0.0),
                angular_l1_vs_isotropic: l1_distance(&quantum, &iso, None)?,
            })
        })
        .collect();
    let rows = rows?;
    let d: Vec<f64> = rows.iter().map(|r| r.distance).collect();
    Ok(SingularLimitReport {
        strictly_decreasing: strictly_decreasing(&d),
        rows,
    })
}

/// Keeping only the highest-power term of the `l = 0` Laguerre sum:
/// `|R| ~ sqrt(4/n^5) / (n-1)! e^{-r/n} (2r/n)^{n-1}`, evaluated in log space.
pub fn last_term_approx(n: u32, r: f64) -> f64 {
    let nf = f64::from(n);
    let log = 0.5 * (4.0 / nf.powi(5)).ln() - log_factorial(u64::from(n - 1)) - r / nf
        + (nf - 1.0) * (2.0 * r / nf).ln();
    if n == 1 {
        // (2r/n)^0 = 1 even at r = 0
        return 2.0 * (-r).exp();
    }
    log.exp()
}

/// `|last_term_approx - |R_n0|| / |R_n0|` at radius `r`.
pub fn last_term_relative_error(n: u32, r: f64) -> Result<f64> {
    let qn = QuantumNumbers::new(n.into(), 0, 0)?;
    let exact = hydrogen::radial_wavefunction_log(qn, r);
    let approx = last_term_approx(n, r).ln();
    // |exp(a - e) - 1| without forming either magnitude
    Ok((approx - exact.log_abs).exp_m1().abs())
}
