use std::f64::consts::PI;

use super::log_scaled::{LogScaledValue, ScaledPair};

/// Fully normalized associated Legendre function
/// `sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(x)`, Condon-Shortley phase included.
///
/// This is the spherical harmonic `Y_l^m(theta, phi)` with `x = cos(theta)` and
/// the `e^{i m phi}` factor dropped. The diagonal seed is formed in log space
/// and the (l, m)-ascending recurrence runs in normalized form, so no
/// unnormalized factorial ratio is ever materialized.
///
/// Requires `m <= l` and `|x| <= 1`.
pub fn assoc_legendre_normalized(l: u32, m: u32, x: f64) -> f64 {
    assoc_legendre_normalized_log(l, m, x).to_real()
}

/// Log-scaled form of [`assoc_legendre_normalized`].
pub fn assoc_legendre_normalized_log(l: u32, m: u32, x: f64) -> LogScaledValue {
    debug_assert!(m <= l, "order {m} exceeds degree {l}");
    debug_assert!(x.abs() <= 1.0, "argument {x} outside [-1, 1]");
    let x = x.clamp(-1.0, 1.0);
    let mf = f64::from(m);

    // ln |Pbar_m^m| = 1/2 ln((2m+1)/(4pi)) + 1/2 sum_{k=1}^m ln((2k-1)/(2k)) + m/2 ln(1-x^2)
    let mut log_seed = 0.5 * ((2.0 * mf + 1.0) / (4.0 * PI)).ln();
    for k in 1..=m {
        let kf = f64::from(k);
        log_seed += 0.5 * (-0.5 / kf).ln_1p();
    }
    if m > 0 {
        let one_minus_x2 = (-x).ln_1p() + x.ln_1p();
        if one_minus_x2 == f64::NEG_INFINITY {
            return LogScaledValue::ZERO;
        }
        log_seed += 0.5 * mf * one_minus_x2;
    }
    let seed_sign: f64 = if m % 2 == 1 { -1.0 } else { 1.0 };
    if l == m {
        return LogScaledValue::from_real(seed_sign).scale_log(log_seed);
    }

    // Pbar_{m+1}^m = x sqrt(2m+3) Pbar_m^m
    let mut pair = ScaledPair::new(seed_sign, x * (2.0 * mf + 3.0).sqrt() * seed_sign);
    let mut a_prev = (2.0 * mf + 3.0).sqrt();
    for deg in (m + 2)..=l {
        let lf = f64::from(deg);
        let a = ((4.0 * lf * lf - 1.0) / ((lf - mf) * (lf + mf))).sqrt();
        let next = a * (x * pair.curr - pair.prev / a_prev);
        pair.push(next);
        a_prev = a;
    }
    pair.current().scale_log(log_seed)
}
