//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use orbitwave_core::analysis::{self, DEFAULT_POINTS};
use orbitwave_core::hydrogen::{self, QuantumNumbers};
use orbitwave_core::kepler::{self, OrbitEnsembleParams};
use orbitwave_core::oracle::{self, SamplingConfig};
use rand::{Rng, SeedableRng};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn qn(n: i64, l: i64, m: i64) -> QuantumNumbers {
    QuantumNumbers::new(n, l, m).unwrap()
}

fn params(n: i64, l: i64, m: i64) -> OrbitEnsembleParams {
    kepler::make_params(qn(n, l, m))
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn quantum_normalization() -> Outcome {
    let start = Instant::now();
    let mut worst_r: f64 = 0.0;
    for (n, l) in [(10, 0), (50, 25), (100, 50), (200, 100)] {
        worst_r = worst_r.max((hydrogen::radial_norm(qn(n, l, 0)).unwrap() - 1.0).abs());
    }
    let mut worst_a: f64 = 0.0;
    for (l, m) in [(5, 1), (50, 10), (100, 20)] {
        worst_a = worst_a.max((hydrogen::angular_norm(qn(l + 1, l, m)).unwrap() - 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst_r < 1e-6 && worst_a < 1e-8 && secs < 10.0,
        format!("radial max |1-I| {worst_r:.2e} (<1e-6), angular {worst_a:.2e} (<1e-8), {secs:.2}s (<10s)"),
    )
}

fn classical_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for (n, l) in [(10, 5), (50, 25), (100, 50), (10, 0)] {
        let p = params(n, l, 0);
        for _ in 0..10_000 {
            let r = rng.gen_range(p.r_peri..p.r_apo);
            if r <= p.r_peri || r <= 0.0 {
                continue;
            }
            let direct = if l == 0 {
                kepler::radial_density_l0(p.n, r).unwrap()
            } else {
                kepler::radial_density(&p, r).unwrap()
            };
            let ecc = kepler::radial_density_eccentric(&p, r).unwrap();
            worst = worst.max((direct / ecc - 1.0).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst < 1e-10 && secs < 1.0,
        format!("max relative difference {worst:.2e} (<1e-10) incl. l=0, {secs:.3}s (<1s)"),
    )
}

fn classical_normalization() -> Outcome {
    let mut worst_r: f64 = 0.0;
    for (n, l) in [(10, 5), (10, 0), (50, 25), (100, 50), (200, 100)] {
        worst_r = worst_r.max((kepler::radial_norm(&params(n, l, 0)).unwrap() - 1.0).abs());
    }
    let mut worst_a: f64 = 0.0;
    for (n, l, m) in [(10, 5, 1), (100, 50, 10), (200, 100, 20)] {
        worst_a = worst_a.max((kepler::angular_norm(&params(n, l, m)).unwrap() - 1.0).abs());
    }
    (
        worst_r < 1e-8 && worst_a < 1e-6,
        format!("radial max |1-I| {worst_r:.2e} (<1e-8), angular {worst_a:.2e} (<1e-6)"),
    )
}

fn monte_carlo_verification() -> Outcome {
    let start = Instant::now();
    let cfg = SamplingConfig::new(1_000_000, 42);
    let mut d = Vec::new();
    for (n, l) in [(10, 5), (10, 0)] {
        let p = params(n, l, 0);
        let h = oracle::histogram_radial(&p, 200, &cfg).unwrap();
        d.push(oracle::radial_l1(&p, &h).unwrap());
    }
    let p = params(10, 5, 1);
    let h = oracle::histogram_angular(&p, 200, &cfg).unwrap();
    d.push(oracle::angular_l1(&p, &h).unwrap());
    let secs = start.elapsed().as_secs_f64();
    (
        d.iter().all(|&x| x < 0.02) && secs < 30.0,
        format!(
            "L1 radial(10,5) {:.4}, radial(10,0) {:.4}, angular(10,5,1) {:.4} (<0.02), {secs:.2}s (<30s)",
            d[0], d[1], d[2]
        ),
    )
}

fn radial_trends() -> Outcome {
    let ns = [10u32, 50, 100];
    let mut l1_zero = Vec::new();
    let mut l1_half = Vec::new();
    let mut mass = Vec::new();
    for &n in &ns {
        let q0 = qn(n.into(), 0, 0);
        l1_zero.push(analysis::radial_report(q0, DEFAULT_POINTS).unwrap().l1);
        l1_half.push(analysis::radial_report(qn(n.into(), (n / 2).into(), 0), DEFAULT_POINTS).unwrap().l1);
        mass.push(analysis::mass_in_support(q0).unwrap());
    }
    let env = analysis::envelope_check(qn(50, 0, 0)).unwrap();
    let env_ok = !env.peaks.is_empty() && env.min_ratio >= 0.85 && env.max_ratio <= 1.10;
    (
        analysis::strictly_decreasing(&l1_zero)
            && analysis::strictly_decreasing(&l1_half)
            && analysis::strictly_increasing(&mass)
            && env_ok,
        format!(
            "L1 l=0 {} and l=n/2 {} (decreasing), mass l=0 {} (increasing), envelope n=50 [{:.4}, {:.4}] over {} peaks (within [0.85, 1.10])",
            fmt_list(&l1_zero),
            fmt_list(&l1_half),
            fmt_list(&mass),
            env.min_ratio,
            env.max_ratio,
            env.peaks.len()
        ),
    )
}

fn angular_trend() -> Outcome {
    let l1: Vec<f64> = [(10, 5, 1), (100, 50, 10), (200, 100, 20)]
        .iter()
        .map(|&(n, l, m)| analysis::angular_report(qn(n, l, m), DEFAULT_POINTS).unwrap().l1)
        .collect();
    (
        analysis::strictly_decreasing(&l1),
        format!("angular L1 over (10,5,1), (100,50,10), (200,100,20) = {} (strictly decreasing)", fmt_list(&l1)),
    )
}

fn apsis_emergence() -> Outcome {
    let q = qn(100, 50, 0);
    let p = kepler::make_params(q);
    let align = analysis::apsis_alignment(q, hydrogen::default_r_max(100));
    let offsets: Vec<f64> = align.iter().map(|a| a.offset).collect();
    let peaks_ok = align.len() == 2 && offsets.iter().all(|o| o.abs() < 0.02);
    let identity_ok = p.r_peri + p.r_apo == 20_000.0;
    (
        peaks_ok && identity_ok,
        format!(
            "peak offsets / width: inner {:+.4}, outer {:+.4} (|.| < 0.02); r_peri + r_apo = 2n^2 exactly: {identity_ok}",
            offsets.first().copied().unwrap_or(f64::NAN),
            offsets.last().copied().unwrap_or(f64::NAN)
        ),
    )
}

fn singular_limit() -> Outcome {
    let study = analysis::singular_limit_study(&[5, 10, 20, 40], DEFAULT_POINTS).unwrap();
    let d: Vec<f64> = study.rows.iter().map(|r| r.distance).collect();
    let e10 = analysis::last_term_relative_error(10, 1.8 * 100.0).unwrap();
    let e50 = analysis::last_term_relative_error(50, 1.8 * 2500.0).unwrap();
    let n1_worst = (0..=200)
        .map(|i| {
            let r = f64::from(i) * 0.1;
            let exact = hydrogen::radial_wavefunction(qn(1, 0, 0), r).abs();
            (analysis::last_term_approx(1, r) / exact - 1.0).abs()
        })
        .fold(0.0, f64::max);
    (
        study.strictly_decreasing && e50 < e10 && n1_worst < 1e-14,
        format!(
            "L2 distance over n=5,10,20,40 {} (decreasing); last-term error n=10 {e10:.3e}, n=50 {e50:.3e} (decreasing); n=1 max relative {n1_worst:.1e}",
            fmt_list(&d)
        ),
    )
}

fn oscillator() -> Outcome {
    let norm = hydrogen::oscillator_norm(10).unwrap();
    let tp = kepler::oscillator_turning_point(10);
    let edge = 21f64.sqrt();
    let support_ok = tp == edge
        && kepler::oscillator_classical_density(10, edge) == 0.0
        && kepler::oscillator_classical_density(10, -edge) == 0.0
        && kepler::oscillator_classical_density(10, edge.next_down()) > 0.0
        && kepler::oscillator_classical_density(10, (-edge).next_up()) > 0.0
        && kepler::oscillator_classical_density(10, edge.next_up()) == 0.0;
    let env = analysis::oscillator_envelope_check(10);
    let env_ok = !env.peaks.is_empty() && env.min_ratio >= 0.85 && env.max_ratio <= 1.10;
    (
        (norm - 1.0).abs() < 1e-8 && support_ok && env_ok,
        format!(
            "|1-I| {:.2e} (<1e-8); support |x| < sqrt(21): {support_ok}; envelope [{:.4}, {:.4}] over {} peaks",
            (norm - 1.0).abs(),
            env.min_ratio,
            env.max_ratio,
            env.peaks.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (i, threads) in [None, Some("1"), Some("3"), Some("8")].into_iter().enumerate() {
        let out = dir.path().join(format!("run{i}.csv"));
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_orbitwave"));
        cmd.args(["oracle", "--n", "10", "--l", "5", "--m", "1", "--samples", "1000000", "--seed", "42"])
            .arg("--out")
            .arg(&out);
        if let Some(t) = threads {
            cmd.args(["--threads", t]);
        }
        let status = cmd.output().unwrap().status;
        assert!(status.success());
        files.push(std::fs::read(&out).unwrap());
    }
    let same = files.windows(2).all(|w| w[0] == w[1]);
    (same, format!("4 oracle runs (default, 1, 3, 8 workers) byte-identical: {same}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("quantum normalization", quantum_normalization),
        ("classical closed form vs eccentric-anomaly form", classical_oracle_equivalence),
        ("classical normalization", classical_normalization),
        ("Monte Carlo verification", monte_carlo_verification),
        ("radial convergence trends", radial_trends),
        ("angular convergence trend", angular_trend),
        ("apsis emergence", apsis_emergence),
        ("singular l=0 limit", singular_limit),
        ("oscillator warm-up", oscillator),
        ("oracle determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
