use orbitwave_core::hydrogen::QuantumNumbers;
use orbitwave_core::kepler::{self, OrbitEnsembleParams};
use orbitwave_core::oracle::{self, PhaseMode, SamplingConfig};

const SAMPLES: usize = 1_000_000;
const BINS: usize = 200;

fn params(n: i64, l: i64, m: i64) -> OrbitEnsembleParams {
    kepler::make_params(QuantumNumbers::new(n, l, m).unwrap())
}

#[test]
fn radial_histograms_match_analytic() {
    for (n, l) in [(10, 5), (10, 0)] {
        let p = params(n, l, 0);
        let h = oracle::histogram_radial(&p, BINS, &SamplingConfig::new(SAMPLES, 42)).unwrap();
        let d = oracle::radial_l1(&p, &h).unwrap();
        println!("radial ({n},{l}) L1 = {d:.5}");
        assert!(d < 0.02, "({n},{l}): {d}");
    }
}

#[test]
fn angular_histogram_matches_two_branch_mean() {
    let p = params(10, 5, 1);
    let h = oracle::histogram_angular(&p, BINS, &SamplingConfig::new(SAMPLES, 42)).unwrap();
    let d = oracle::angular_l1(&p, &h).unwrap();
    println!("angular (10,5,1) L1 = {d:.5}");
    assert!(d < 0.02, "{d}");
}

#[test]
fn uniform_phase_experiment() {
    // no threshold: reports how far a uniformly phased ensemble sits from the two-branch mean
    let p = params(10, 5, 1);
    let cfg = SamplingConfig::new(SAMPLES, 42).with_phase_mode(PhaseMode::UniformPhase);
    let h = oracle::histogram_angular(&p, BINS, &cfg).unwrap();
    let d = oracle::angular_l1(&p, &h).unwrap();
    println!("uniform-phase vs two-branch mean, (10,5,1): L1 = {d:.4}");
    assert!(d.is_finite());
}

#[test]
fn joint_marginals_match_one_dimensional_histograms() {
    let p = params(10, 5, 1);
    let cfg = SamplingConfig::new(SAMPLES, 42);
    let joint = oracle::histogram_2d(&p, 100, 100, &cfg).unwrap();
    let radial = oracle::histogram_radial(&p, 100, &cfg).unwrap();
    let angular = oracle::histogram_angular(&p, 100, &cfg).unwrap();
    // the same stream feeds both, so marginals agree exactly
    assert_eq!(joint.radial_marginal().counts, radial.counts);
    assert_eq!(joint.angular_marginal().counts, angular.counts);

    let other = oracle::histogram_radial(&p, 100, &SamplingConfig::new(SAMPLES, 43)).unwrap();
    let d: f64 = joint
        .radial_marginal()
        .density
        .iter()
        .zip(&other.density)
        .enumerate()
        .map(|(i, (a, b))| (a - b).abs() * other.width(i))
        .sum();
    assert!(d < 0.03, "{d}");
}

#[test]
fn doubling_samples_shrinks_error_by_root_two() {
    let p = params(10, 5, 0);
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let small = oracle::histogram_radial(&p, BINS, &SamplingConfig::new(100_000, seed)).unwrap();
        let large = oracle::histogram_radial(&p, BINS, &SamplingConfig::new(200_000, seed + 1000)).unwrap();
        ratios.push(oracle::radial_l1(&p, &small).unwrap() / oracle::radial_l1(&p, &large).unwrap());
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    println!("mean L1 ratio on doubling = {mean:.3}");
    assert!((1.2..1.65).contains(&mean), "{mean}");
}

#[test]
fn kepler_residual_over_random_inputs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for i in 0..100_000 {
        let m = rng.gen_range(0.0..std::f64::consts::TAU);
        let e = match i % 4 {
            0 => 0.0,
            1 => 0.999_999,
            2 => 1.0,
            _ => rng.gen_range(0.0..=1.0),
        };
        let u = oracle::solve_kepler(m, e).unwrap();
        let r = (u - e * u.sin() - m).rem_euclid(std::f64::consts::TAU);
        let r = r.min(std::f64::consts::TAU - r);
        assert!(r < 1e-12, "M={m} e={e}: residual {r:e}");
    }
}

#[test]
fn mean_radius_within_three_sigma() {
    for (n, l) in [(10, 5), (10, 0), (30, 7)] {
        let p = params(n, l, 0);
        let mom = oracle::sample_moments(&p, &SamplingConfig::new(SAMPLES, 5)).unwrap();
        let (mean, se) = mom.mean_radius();
        let want = oracle::mean_radius_exact(&p);
        assert!((mean - want).abs() < 3.0 * se, "({n},{l}): {mean} vs {want} (se {se})");
    }
}
