use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use orbitwave_core::analysis::{Ratio, DEFAULT_POINTS};
use orbitwave_core::hydrogen;
use orbitwave_core::oracle::PhaseMode;

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ORBITWAVE_OUT";

/// Per-axis grid size for `density3d` when `--points` is not given.
pub const DENSITY3D_POINTS: usize = 200;

pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_BINS: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_LIMIT_N_LIST: [u32; 4] = [5, 10, 20, 40];

#[derive(Debug, Parser)]
#[command(name = "orbitwave", version, about = "Quantum and classical hydrogen densities as CSV/JSON tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Radial densities: quantum, classical, doubled classical, smoothed quantum
    Radial {
        #[command(flatten)]
        qn: QnArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Polar-angle densities: quantum and classical two-branch mean
    Angular {
        #[command(flatten)]
        qn: QnArgs,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// 3D densities on an (r, theta) grid: |psi|^2 and the classical product ansatz
    Density3d {
        #[command(flatten)]
        qn: QnArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Harmonic-oscillator warm-up: quantum and classical position densities
    Oscillator {
        #[arg(long)]
        n: i64,
        /// Half-width of the x range, or "auto" (1.5 times the turning point)
        #[arg(long = "r-max")]
        r_max: Option<RMax>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte Carlo histogram of sampled classical positions
    Oracle {
        #[command(flatten)]
        qn: QnArgs,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long = "phase-mode", default_value = "two-branch")]
        phase_mode: PhaseMode,
        #[arg(long, value_enum, default_value_t = Axis::Radial)]
        axis: Axis,
        /// Worker threads; results do not depend on it
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fixed-ratio convergence table of quantum/classical distances
    Converge {
        #[arg(long = "ratio-l")]
        ratio_l: Ratio,
        #[arg(long = "ratio-m")]
        ratio_m: Option<Ratio>,
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<u32>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// R_n0 versus R_n1 as n grows
    Limit {
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Option<Vec<u32>>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct QnArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long, default_value_t = 0)]
    pub l: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub points: Option<usize>,
    /// Upper radius in units of a, or "auto" (2.2 n^2)
    #[arg(long = "r-max")]
    pub r_max: Option<RMax>,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; defaults to a generated name in $ORBITWAVE_OUT or the current directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Radial,
    Angular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Radial,
    Angular,
    Density3d,
    Oscillator,
    Oracle,
    Converge,
    Limit,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Radial => "radial",
            CommandKind::Angular => "angular",
            CommandKind::Density3d => "density3d",
            CommandKind::Oscillator => "oscillator",
            CommandKind::Oracle => "oracle",
            CommandKind::Converge => "converge",
            CommandKind::Limit => "limit",
        }
    }
}

/// `--r-max` value: a positive number or `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RMax {
    Auto,
    Value(f64),
}

impl FromStr for RMax {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(RMax::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(RMax::Value(v)),
            _ => Err(format!("expected a positive number or 'auto', got '{s}'")),
        }
    }
}

/// Fully resolved run configuration. Embedded in JSON outputs; the output
/// path and thread count are left out because they do not affect the data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<Axis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_l: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_m: Option<String>,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl RunConfig {
    fn base(command: CommandKind, out: OutArgs) -> Self {
        Self {
            command,
            n: None,
            l: None,
            m: None,
            points: None,
            r_max: None,
            samples: None,
            bins: None,
            seed: None,
            phase_mode: None,
            axis: None,
            n_list: None,
            ratio_l: None,
            ratio_m: None,
            format: out.format,
            out: out.out,
            threads: None,
        }
    }

    fn with_qn(mut self, qn: &QnArgs) -> Self {
        self.n = Some(qn.n);
        self.l = Some(qn.l);
        self.m = Some(qn.m);
        self
    }

    /// Resolves defaults and `auto` values.
    pub fn from_command(command: Command) -> Result<Self, CliError> {
        let cfg = match command {
            Command::Radial { qn, grid, out } => {
                let mut cfg = Self::base(CommandKind::Radial, out).with_qn(&qn);
                cfg.points = Some(positive_points(grid.points.unwrap_or(DEFAULT_POINTS))?);
                cfg.r_max = Some(resolve_r_max(grid.r_max, qn.n));
                cfg
            }
            Command::Angular { qn, points, out } => {
                let mut cfg = Self::base(CommandKind::Angular, out).with_qn(&qn);
                cfg.points = Some(positive_points(points.unwrap_or(DEFAULT_POINTS))?);
                cfg
            }
            Command::Density3d { qn, grid, out } => {
                let mut cfg = Self::base(CommandKind::Density3d, out).with_qn(&qn);
                cfg.points = Some(positive_points(grid.points.unwrap_or(DENSITY3D_POINTS))?);
                cfg.r_max = Some(resolve_r_max(grid.r_max, qn.n));
                cfg
            }
            Command::Oscillator { n, r_max, points, out } => {
                if n < 0 {
                    return Err(CliError::Usage(format!("oscillator level n must be >= 0 (got {n})")));
                }
                let mut cfg = Self::base(CommandKind::Oscillator, out);
                cfg.n = Some(n);
                cfg.points = Some(positive_points(points.unwrap_or(DEFAULT_POINTS))?);
                cfg.r_max = Some(match r_max {
                    Some(RMax::Value(v)) => v,
                    _ => 1.5 * ((2 * n + 1) as f64).sqrt(),
                });
                cfg
            }
            Command::Oracle {
                qn,
                samples,
                bins,
                seed,
                phase_mode,
                axis,
                threads,
                out,
            } => {
                if samples == 0 || bins == 0 {
                    return Err(CliError::Usage("--samples and --bins must be positive".into()));
                }
                if threads == Some(0) {
                    return Err(CliError::Usage("--threads must be positive".into()));
                }
                let mut cfg = Self::base(CommandKind::Oracle, out).with_qn(&qn);
                cfg.samples = Some(samples);
                cfg.bins = Some(bins);
                cfg.seed = Some(seed);
                cfg.phase_mode = Some(phase_mode.to_string());
                cfg.axis = Some(axis);
                cfg.threads = threads;
                cfg
            }
            Command::Converge {
                ratio_l,
                ratio_m,
                n_list,
                points,
                out,
            } => {
                let mut cfg = Self::base(CommandKind::Converge, out);
                cfg.ratio_l = Some(ratio_l.to_string());
                cfg.ratio_m = ratio_m.map(|r| r.to_string());
                cfg.n_list = Some(non_empty(n_list)?);
                cfg.points = Some(positive_points(points.unwrap_or(DEFAULT_POINTS))?);
                cfg
            }
            Command::Limit { n_list, points, out } => {
                let mut cfg = Self::base(CommandKind::Limit, out);
                cfg.n_list = Some(non_empty(n_list.unwrap_or_else(|| DEFAULT_LIMIT_N_LIST.to_vec()))?);
                cfg.points = Some(positive_points(points.unwrap_or(DEFAULT_POINTS))?);
                cfg
            }
        };
        Ok(cfg)
    }

    pub fn phase_mode(&self) -> Result<PhaseMode, CliError> {
        self.phase_mode
            .as_deref()
            .unwrap_or("two-branch")
            .parse()
            .map_err(|e: orbitwave_core::Error| CliError::Usage(e.to_string()))
    }

    pub fn ratios(&self) -> Result<(Ratio, Option<Ratio>), CliError> {
        let parse = |s: &str| s.parse::<Ratio>().map_err(|e| CliError::Usage(e.to_string()));
        let ratio_l = parse(self.ratio_l.as_deref().unwrap_or("0/1"))?;
        let ratio_m = self.ratio_m.as_deref().map(parse).transpose()?;
        Ok((ratio_l, ratio_m))
    }

    /// File name used when `--out` is absent.
    pub fn default_file_name(&self) -> String {
        let stem = match self.command {
            CommandKind::Converge => format!(
                "converge_l{}_m{}",
                self.ratio_l.as_deref().unwrap_or("").replace('/', "-"),
                self.ratio_m.as_deref().unwrap_or("0").replace('/', "-"),
            ),
            CommandKind::Limit => "limit".to_string(),
            CommandKind::Oscillator => format!("oscillator_n{}", self.n.unwrap_or(0)),
            CommandKind::Oracle => format!(
                "oracle_{}_n{}_l{}_m{}",
                match self.axis {
                    Some(Axis::Angular) => "angular",
                    _ => "radial",
                },
                self.n.unwrap_or(0),
                self.l.unwrap_or(0),
                self.m.unwrap_or(0)
            ),
            kind => format!(
                "{}_n{}_l{}_m{}",
                kind.name(),
                self.n.unwrap_or(0),
                self.l.unwrap_or(0),
                self.m.unwrap_or(0)
            ),
        };
        format!("{stem}.{}", self.format.extension())
    }

    /// `--out`, or the default name inside `$ORBITWAVE_OUT` (current directory if unset).
    pub fn output_path(&self) -> PathBuf {
        if let Some(path) = &self.out {
            return path.clone();
        }
        let dir = std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        dir.join(self.default_file_name())
    }
}

fn resolve_r_max(r_max: Option<RMax>, n: i64) -> f64 {
    match r_max {
        Some(RMax::Value(v)) => v,
        // invalid n is rejected later with the quantum-number diagnostic
        _ => hydrogen::default_r_max(n.clamp(1, i64::from(u32::MAX)) as u32),
    }
}

fn positive_points(points: usize) -> Result<usize, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!("--points must be at least 2 (got {points})")));
    }
    Ok(points)
}

fn non_empty(n_list: Vec<u32>) -> Result<Vec<u32>, CliError> {
    if n_list.is_empty() {
        return Err(CliError::Usage("--n-list must not be empty".into()));
    }
    Ok(n_list)
}
