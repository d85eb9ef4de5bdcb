use std::f64::consts::PI;
use std::sync::OnceLock;

/// Largest `k` whose factorial is finite in `f64`.
const TABLE_MAX: usize = 170;

fn table() -> &'static [f64; TABLE_MAX + 1] {
    static TABLE: OnceLock<[f64; TABLE_MAX + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; TABLE_MAX + 1];
        let mut prod = 1.0f64;
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            prod *= k as f64;
            *slot = prod.ln();
        }
        out
    })
}

/// `ln(k!)`.
///
/// Tabulated from the running product up to `k = 170`, Stirling series beyond.
pub fn log_factorial(k: u64) -> f64 {
    if (k as usize) <= TABLE_MAX {
        return table()[k as usize];
    }
    // ln Gamma(x) with x = k + 1 > 171; truncation error of the series is below 1e-20.
    let x = k as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    fn ln_biguint(v: &BigUint) -> f64 {
        let bits = v.bits();
        let shift = bits.saturating_sub(60);
        let top: BigUint = v >> shift;
        let mantissa = top.to_u64_digits().first().copied().unwrap_or(0) as f64;
        mantissa.ln() + shift as f64 * std::f64::consts::LN_2
    }

    fn exact_log_factorial(k: u64) -> f64 {
        let mut acc = BigUint::one();
        for i in 2..=k {
            acc *= i;
        }
        ln_biguint(&acc)
    }

    #[test]
    fn small_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!((log_factorial(5) - 120f64.ln()).abs() < 1e-15);
        assert!((log_factorial(5) - 4.787_491_742_782_046).abs() < 1e-13);
    }

    #[test]
    fn matches_big_integer_product() {
        for k in [2u64, 20, 23, 100, 169, 170, 171, 172, 250, 500, 1000, 5000] {
            let exact = exact_log_factorial(k);
            let rel = (log_factorial(k) - exact).abs() / exact;
            assert!(rel < 1e-13, "k={k} rel={rel}");
        }
    }
}
