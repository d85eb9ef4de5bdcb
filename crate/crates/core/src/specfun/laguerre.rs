use super::log_scaled::{LogScaledValue, ScaledPair};

/// Generalized Laguerre polynomial `L_k^alpha(x)` by the ascending three-term
/// recurrence.
///
/// Overflows to infinity for large degree and argument; see [`laguerre_log`].
pub fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = 1.0 + alpha - x;
    for j in 1..k {
        let jf = f64::from(j);
        let next = ((2.0 * jf + 1.0 + alpha - x) * curr - (jf + alpha) * prev) / (jf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// Same recurrence as [`laguerre`], carried with power-of-two rescaling so the
/// result never overflows.
pub fn laguerre_log(k: u32, alpha: f64, x: f64) -> LogScaledValue {
    if k == 0 {
        return LogScaledValue::ONE;
    }
    let mut pair = ScaledPair::new(1.0, 1.0 + alpha - x);
    for j in 1..k {
        let jf = f64::from(j);
        let next =
            ((2.0 * jf + 1.0 + alpha - x) * pair.curr - (jf + alpha) * pair.prev) / (jf + 1.0);
        pair.push(next);
    }
    pair.current()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    fn binomial(n: u64, k: u64) -> BigInt {
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        acc
    }

    /// Exact explicit sum `sum_i (-1)^i C(k+alpha, k-i) x^i / i!` for integer
    /// alpha and rational x.
    fn exact_series(k: u64, alpha: u64, x: &BigRational) -> BigRational {
        let mut sum = BigRational::zero();
        let mut power = BigRational::one();
        let mut fact = BigInt::one();
        for i in 0..=k {
            if i > 0 {
                power = &power * x;
                fact *= BigInt::from(i);
            }
            let term = BigRational::from_integer(binomial(k + alpha, k - i)) * &power
                / BigRational::from_integer(fact.clone());
            if i % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        sum
    }

    fn ln_big(v: &BigInt) -> f64 {
        let bits = v.bits();
        let shift = bits.saturating_sub(60);
        let top: BigInt = v.abs() >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }

    fn ln_abs_rational(v: &BigRational) -> f64 {
        ln_big(v.numer()) - ln_big(v.denom())
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(laguerre(0, 7.3, 12.0), 1.0);
        assert!((laguerre(1, 2.0, 0.5) - 2.5).abs() < 1e-15);
        assert!((laguerre(2, 0.0, 1.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn log_variant_low_degree() {
        let v = laguerre_log(0, 3.0, 2.0);
        assert_eq!((v.sign, v.log_abs), (1, 0.0));
        let v = laguerre_log(2, 0.0, 1.0);
        assert_eq!(v.sign, -1);
        assert!((v.log_abs - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn matches_exact_series_moderate_degree() {
        for (k, alpha, xn, xd) in [(10u64, 1u64, 7i64, 2i64), (30, 3, 45, 1), (49, 101, 200, 1)] {
            let x = BigRational::new(BigInt::from(xn), BigInt::from(xd));
            let exact = exact_series(k, alpha, &x);
            let got = laguerre_log(k as u32, alpha as f64, xn as f64 / xd as f64);
            assert_eq!(i8::from(exact.is_positive()) - i8::from(exact.is_negative()), got.sign);
            let rel = (got.log_abs - ln_abs_rational(&exact)).abs();
            assert!(rel < 1e-11, "k={k} alpha={alpha} dlog={rel}");
        }
    }

    #[test]
    fn high_degree_against_exact_rational() {
        let x = BigRational::from_integer(BigInt::from(50));
        let exact = exact_series(199, 101, &x);
        let got = laguerre_log(199, 101.0, 50.0);
        assert!(got.log_abs.is_finite());
        let exact_sign = if exact.is_negative() { -1 } else { 1 };
        assert_eq!(got.sign, exact_sign);
        // |exp(d) - 1| < 1e-9 for the relative error of the magnitude
        let dlog = got.log_abs - ln_abs_rational(&exact);
        assert!(dlog.abs() < 1e-9, "dlog={dlog}");
    }

    #[test]
    fn plain_and_log_agree() {
        for k in [0u32, 1, 5, 20, 60, 120] {
            for alpha in [1.0, 3.0, 41.0] {
                for x in [0.0, 0.3, 5.0, 40.0, 150.0] {
                    let plain = laguerre(k, alpha, x);
                    if plain.abs() >= 1e300 || plain == 0.0 {
                        continue;
                    }
                    let lg = laguerre_log(k, alpha, x).to_real();
                    assert!(((lg - plain) / plain).abs() < 1e-12, "k={k} a={alpha} x={x}");
                }
            }
        }
    }
}
