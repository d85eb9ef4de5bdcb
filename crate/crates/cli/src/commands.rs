use serde::Serialize;

use orbitwave_core::analysis::{self, NORMALIZATION_DRIFT_LIMIT};
use orbitwave_core::hydrogen::{self, QuantumNumbers};
use orbitwave_core::kepler::{self, L0_ANGULAR_CONVENTION};
use orbitwave_core::oracle::{self, SamplingConfig};
use orbitwave_core::quadrature::{integrate, QuadOptions};

use crate::config::{Axis, CommandKind, RunConfig};
use crate::output::{Cell, Table};
use crate::CliError;

pub fn compute(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.command {
        CommandKind::Radial => radial(cfg),
        CommandKind::Angular => angular(cfg),
        CommandKind::Density3d => density3d(cfg),
        CommandKind::Oscillator => oscillator(cfg),
        CommandKind::Oracle => oracle_histogram(cfg),
        CommandKind::Converge => converge(cfg),
        CommandKind::Limit => limit(cfg),
    }
}

fn quantum_numbers(cfg: &RunConfig) -> Result<QuantumNumbers, CliError> {
    Ok(QuantumNumbers::new(
        cfg.n.unwrap_or(0),
        cfg.l.unwrap_or(0),
        cfg.m.unwrap_or(0),
    )?)
}

fn points(cfg: &RunConfig) -> usize {
    cfg.points.unwrap_or(analysis::DEFAULT_POINTS)
}

/// Fails when a sampled curve's trapezoid mass is off from the exact mass on
/// the same range by more than the drift limit.
fn check_drift(what: &str, trapezoid: f64, exact: f64) -> Result<f64, CliError> {
    let drift = (trapezoid - exact).abs();
    if drift > NORMALIZATION_DRIFT_LIMIT {
        return Err(CliError::Computation(format!(
            "normalization drift in {what}: trapezoid {trapezoid:.6} vs exact {exact:.6}"
        )));
    }
    Ok(drift)
}

#[derive(Serialize)]
struct CurveMass {
    trapezoid: f64,
    exact: f64,
}

fn radial(cfg: &RunConfig) -> Result<Table, CliError> {
    let qn = quantum_numbers(cfg)?;
    let r_max = cfg.r_max.unwrap_or_else(|| hydrogen::default_r_max(qn.n()));
    let curves = analysis::radial_curves(qn, r_max, points(cfg))?;
    let exact_q = hydrogen::radial_probability(qn, 0.0, r_max)?;
    check_drift("radial quantum density", curves.quantum.integral, exact_q)?;
    let exact_c = kepler::radial_probability(&curves.params, 0.0, r_max)?;

    let mut table = Table::new(&["r_tilde", "p_q", "p_c", "p_c_x2", "p_q_smoothed"]);
    let q = curves.quantum.values();
    let c = curves.classical.values();
    let s = curves.smoothed.values();
    for (i, &r) in curves.quantum.grid().iter().enumerate() {
        table.push(vec![r.into(), q[i].into(), c[i].into(), (2.0 * c[i]).into(), s[i].into()]);
    }
    table.meta("units", "r_tilde = r/a; densities are probability per unit r_tilde")?;
    table.meta("params", curves.params)?;
    table.meta(
        "quantum_mass",
        CurveMass {
            trapezoid: curves.quantum.integral,
            exact: exact_q,
        },
    )?;
    table.meta(
        "classical_mass",
        CurveMass {
            trapezoid: curves.classical.integral,
            exact: exact_c,
        },
    )?;
    table.report(analysis::radial_report_from(qn, &curves)?)?;
    Ok(table)
}

fn angular(cfg: &RunConfig) -> Result<Table, CliError> {
    let qn = quantum_numbers(cfg)?;
    let (quantum, classical) = analysis::angular_curves(qn, points(cfg))?;
    check_drift("angular quantum density", quantum.integral, 1.0)?;

    let mut table = Table::new(&["theta", "p_q", "p_c"]);
    for (i, &t) in quantum.grid().iter().enumerate() {
        table.push(vec![t.into(), quantum.values()[i].into(), classical.values()[i].into()]);
    }
    table.meta("units", "theta in radians; densities are probability per radian")?;
    table.meta("params", kepler::make_params(qn))?;
    if qn.l() == 0 {
        table.meta("note", L0_ANGULAR_CONVENTION)?;
    }
    table.meta("quantum_trapezoid_mass", quantum.integral)?;
    table.meta("classical_trapezoid_mass", classical.integral)?;
    table.meta(
        "uniform_phase_l1",
        analysis::angular_uniform_phase_l1(qn, points(cfg))?,
    )?;
    table.report(analysis::angular_report_from(qn, &quantum, &classical)?)?;
    Ok(table)
}

fn density3d(cfg: &RunConfig) -> Result<Table, CliError> {
    let qn = quantum_numbers(cfg)?;
    let params = kepler::make_params(qn);
    let pts = points(cfg);
    let r_max = cfg.r_max.unwrap_or_else(|| hydrogen::default_r_max(qn.n()));
    let r_grid = hydrogen::radial_grid(r_max, pts);
    let t_grid = hydrogen::uniform_grid(0.0, std::f64::consts::PI, pts);

    let mut table = Table::new(&["r_tilde", "theta", "rho_q", "rho_c_product"]);
    for &r in &r_grid {
        for &t in &t_grid {
            let rho_c = if r > 0.0 {
                kepler::density3d_product(&params, r, t)?
            } else {
                0.0
            };
            table.push(vec![r.into(), t.into(), hydrogen::density3d(qn, r, t).into(), rho_c.into()]);
        }
    }
    table.meta("units", "r_tilde = r/a, theta in radians; densities in a^-3, independent of phi")?;
    table.meta("params", params)?;
    if qn.l() == 0 {
        table.meta("note", L0_ANGULAR_CONVENTION)?;
    }
    Ok(table)
}

fn oscillator(cfg: &RunConfig) -> Result<Table, CliError> {
    let n = u32::try_from(cfg.n.unwrap_or(0))
        .map_err(|_| CliError::Usage("oscillator level out of range".into()))?;
    let half = cfg.r_max.unwrap_or_else(|| 1.5 * kepler::oscillator_turning_point(n));
    let grid = hydrogen::uniform_grid(-half, half, points(cfg));
    let q: Vec<f64> = grid.iter().map(|&x| hydrogen::oscillator_quantum_density(n, x)).collect();
    let c: Vec<f64> = grid.iter().map(|&x| kepler::oscillator_classical_density(n, x)).collect();
    let trapezoid = orbitwave_core::quadrature::trapezoid(&grid, &q);
    let opts = QuadOptions::default();
    let exact = integrate(|x| hydrogen::oscillator_quantum_density(n, x), -half, half, &opts)?.value;
    check_drift("oscillator quantum density", trapezoid, exact)?;

    let mut table = Table::new(&["x", "p_q", "p_c"]);
    for (i, &x) in grid.iter().enumerate() {
        table.push(vec![x.into(), q[i].into(), c[i].into()]);
    }
    table.meta("units", "x in units of sqrt(hbar/(m omega)); energy n + 1/2 in hbar omega")?;
    table.meta("turning_point", kepler::oscillator_turning_point(n))?;
    table.meta("quantum_mass", CurveMass { trapezoid, exact })?;
    table.report(analysis::oscillator_envelope_check(n))?;
    Ok(table)
}

#[derive(Serialize)]
struct OracleReport {
    samples: u64,
    l1_excluding_edge_bins: f64,
    mean_radius: (f64, f64),
    mean_radius_exact: f64,
}

fn oracle_histogram(cfg: &RunConfig) -> Result<Table, CliError> {
    let qn = quantum_numbers(cfg)?;
    let params = kepler::make_params(qn);
    let bins = cfg.bins.unwrap_or(200);
    let mut sampling = SamplingConfig::new(cfg.samples.unwrap_or(1_000_000), cfg.seed.unwrap_or(42))
        .with_phase_mode(cfg.phase_mode()?);
    if let Some(t) = cfg.threads {
        sampling = sampling.with_threads(t);
    }
    let axis = cfg.axis.unwrap_or(Axis::Radial);
    let (hist, masses, l1) = match axis {
        Axis::Radial => {
            let hist = oracle::histogram_radial(&params, bins, &sampling)?;
            let masses = oracle::radial_bin_masses(&params, &hist.edges)?;
            let l1 = oracle::radial_l1(&params, &hist)?;
            (hist, masses, l1)
        }
        Axis::Angular => {
            let hist = oracle::histogram_angular(&params, bins, &sampling)?;
            let masses = oracle::angular_bin_masses(&params, &hist.edges)?;
            let l1 = oracle::angular_l1(&params, &hist)?;
            (hist, masses, l1)
        }
    };

    let mut table = Table::new(&["bin_left", "bin_right", "density_empirical", "density_analytic"]);
    for i in 0..hist.bins() {
        let w = hist.width(i);
        table.push(vec![
            hist.edges[i].into(),
            hist.edges[i + 1].into(),
            hist.density[i].into(),
            (masses[i] / w).into(),
        ]);
    }
    let moments = oracle::sample_moments(&params, &sampling)?;
    table.meta("params", params)?;
    table.meta(
        "analytic",
        "bin-averaged analytic density (exact bin probability / bin width); angular axis uses the two-branch mean",
    )?;
    table.report(OracleReport {
        samples: hist.total(),
        l1_excluding_edge_bins: l1,
        mean_radius: moments.mean_radius(),
        mean_radius_exact: oracle::mean_radius_exact(&params),
    })?;
    Ok(table)
}

#[derive(Serialize)]
struct Trends {
    radial_l1_strictly_decreasing: bool,
    angular_l1_strictly_decreasing: bool,
    mass_in_support_strictly_increasing: bool,
}

fn converge(cfg: &RunConfig) -> Result<Table, CliError> {
    let (ratio_l, ratio_m) = cfg.ratios()?;
    let n_list = cfg.n_list.clone().unwrap_or_default();
    let rows = analysis::convergence_study(ratio_l, ratio_m, &n_list, points(cfg))?;

    let mut table = Table::new(&[
        "n",
        "l",
        "m",
        "radial_l1",
        "radial_linf",
        "mass_in_support",
        "angular_l1",
        "angular_linf",
        "angular_uniform_phase_l1",
    ]);
    for row in &rows {
        table.push(vec![
            row.qn.n().into(),
            row.qn.l().into(),
            row.qn.m().into(),
            row.radial.l1.into(),
            row.radial.linf.into(),
            row.radial.mass_in_classical_support.into(),
            row.angular.l1.into(),
            row.angular.linf.into(),
            Cell::from(row.angular_uniform_phase_l1),
        ]);
    }
    let radial: Vec<f64> = rows.iter().map(|r| r.radial.l1).collect();
    let angular: Vec<f64> = rows.iter().map(|r| r.angular.l1).collect();
    let mass: Vec<f64> = rows.iter().map(|r| r.radial.mass_in_classical_support).collect();
    table.meta(
        "trends",
        Trends {
            radial_l1_strictly_decreasing: analysis::strictly_decreasing(&radial),
            angular_l1_strictly_decreasing: analysis::strictly_decreasing(&angular),
            mass_in_support_strictly_increasing: analysis::strictly_increasing(&mass),
        },
    )?;
    table.meta("edge_fraction", analysis::EDGE_FRACTION)?;
    table.report(rows)?;
    Ok(table)
}

#[derive(Serialize)]
struct LastTerm {
    n: u32,
    r_tilde: f64,
    approx: f64,
    relative_error: f64,
}

fn limit(cfg: &RunConfig) -> Result<Table, CliError> {
    let n_list = cfg.n_list.clone().unwrap_or_default();
    let pts = points(cfg);
    let report = analysis::singular_limit_study(&n_list, pts)?;

    let mut table = Table::new(&["n", "r_tilde", "r_R_n0", "r_R_n1"]);
    let mut last_terms = Vec::new();
    for &n in &n_list {
        let q0 = QuantumNumbers::new(n.into(), 0, 0)?;
        let q1 = QuantumNumbers::new(n.into(), 1, 0)?;
        let grid = hydrogen::radial_grid(hydrogen::default_r_max(n), pts);
        let (y0, _) = analysis::signed_radial_curve(q0, &grid);
        let (y1, _) = analysis::signed_radial_curve(q1, &grid);
        for (i, &r) in grid.iter().enumerate() {
            table.push(vec![n.into(), r.into(), y0[i].into(), y1[i].into()]);
        }
        let r = 1.8 * f64::from(n) * f64::from(n);
        last_terms.push(LastTerm {
            n,
            r_tilde: r,
            approx: analysis::last_term_approx(n, r),
            relative_error: analysis::last_term_relative_error(n, r)?,
        });
    }
    table.meta("units", "r_tilde = r/a; r R(r) in a^-1/2, sign chosen positive at the largest |value|")?;
    table.meta("last_term", last_terms)?;
    table.report(report)?;
    Ok(table)
}
