use std::f64::consts::PI;

use orbitwave_core::hydrogen::QuantumNumbers;
use orbitwave_core::kepler::{self, Branch};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(n: i64, l: i64, m: i64) -> kepler::OrbitEnsembleParams {
    kepler::make_params(QuantumNumbers::new(n, l, m).unwrap())
}

#[test]
fn eccentric_form_matches_direct_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, l) in [(10, 5), (50, 25), (100, 50), (10, 0)] {
        let p = params(n, l, 0);
        let mut worst: f64 = 0.0;
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
        assert!(worst < 1e-10, "({n},{l}) worst relative difference {worst:e}");
    }
}

#[test]
fn radial_normalization_by_quadrature() {
    for (n, l) in [(10, 5), (10, 0), (50, 25), (100, 50), (200, 100), (2, 1)] {
        let v = kepler::radial_norm(&params(n, l, 0)).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "({n},{l}): {v}");
    }
}

#[test]
fn branch_means_integrate_to_one_each() {
    let p = params(10, 5, 1);
    let inc = p.inclination().unwrap();
    // integrate each branch in gamma where the edge singularity cancels
    let steps = 200_000;
    let h = PI / f64::from(steps);
    for branch in [Branch::One, Branch::Two] {
        let total: f64 = (0..steps)
            .map(|i| {
                let g = (f64::from(i) + 0.5) * h;
                let t = kepler::theta_of_gamma(&inc, g);
                let dtheta = inc.sin_alpha * g.sin() / t.sin();
                kepler::angular_density_branch(&p, t, branch).unwrap() * dtheta
            })
            .sum::<f64>()
            * h;
        assert!((total - 1.0).abs() < 1e-6, "{branch:?}: {total}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn apsis_identities(n in 2i64..5000, l_frac in 0.0f64..1.0) {
        let l = ((l_frac * n as f64).floor() as i64).clamp(1, n - 1);
        let p = params(n, l, 0);
        let n_sq = (n * n) as f64;
        prop_assert_eq!(p.r_peri + p.r_apo, 2.0 * n_sq);
        prop_assert!((p.r_peri * p.r_apo / (n_sq * p.ell_sq) - 1.0).abs() < 1e-12);
        let perihelion = n_sq * (1.0 - p.eccentricity);
        prop_assert!((perihelion - p.r_peri).abs() <= 1e-9 * p.r_peri.max(1.0));
    }

    #[test]
    fn radial_density_support(n in 1i64..400, l_frac in 0.0f64..1.0, r_frac in 0.0f64..1.0) {
        let l = ((l_frac * n as f64).floor() as i64).min(n - 1);
        let p = params(n, l, 0);
        let r_out = p.r_apo * (1.0 + r_frac);
        prop_assert_eq!(kepler::radial_density(&p, r_out).unwrap(), 0.0);
        let r_in = p.r_peri + (p.r_apo - p.r_peri) * (0.001 + 0.998 * r_frac);
        let v = kepler::radial_density(&p, r_in).unwrap();
        prop_assert!(v > 0.0 && v.is_finite());
        if l > 0 {
            prop_assert_eq!(kepler::radial_density(&p, p.r_peri * r_frac.max(1e-3)).unwrap(), 0.0);
        }
    }

    #[test]
    fn angular_density_support_and_symmetry(n in 2i64..300, l_frac in 0.0f64..1.0, m_frac in 0.0f64..1.0, t_frac in 0.0f64..1.0) {
        let l = ((l_frac * n as f64).floor() as i64).clamp(1, n - 1);
        let m = ((m_frac * (l + 1) as f64).floor() as i64).min(l);
        let p = params(n, l, m);
        let (lo, hi) = p.angular_support();
        let outside = lo * t_frac;
        prop_assert_eq!(kepler::angular_density(&p, outside).unwrap(), 0.0);
        prop_assert_eq!(kepler::angular_density(&p, PI - outside).unwrap(), 0.0);
        let inside = lo + (hi - lo) * (0.001 + 0.998 * t_frac);
        let a = kepler::angular_density(&p, inside).unwrap();
        let b = kepler::angular_density(&p, PI - inside).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() <= 1e-12 * a);
        let one = kepler::angular_density_branch(&p, inside, Branch::One).unwrap();
        let two = kepler::angular_density_branch(&p, PI - inside, Branch::Two).unwrap();
        prop_assert!((one - two).abs() <= 1e-12 * one);
    }

    #[test]
    fn negative_m_folds(n in 2i64..100, m in 1i64..50) {
        let l = n - 1;
        let m = m.min(l);
        prop_assert_eq!(params(n, l, m), params(n, l, -m));
    }
}
