use super::log_scaled::{LogScaledValue, ScaledPair};

/// Physicists' Hermite polynomial `H_n(x)` in log-scaled form.
pub fn hermite_log(n: u32, x: f64) -> LogScaledValue {
    if n == 0 {
        return LogScaledValue::ONE;
    }
    let mut pair = ScaledPair::new(1.0, 2.0 * x);
    for k in 1..n {
        let next = 2.0 * x * pair.curr - 2.0 * f64::from(k) * pair.prev;
        pair.push(next);
    }
    pair.current()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_at_integer(n: u32, x: i128) -> i128 {
        let (mut prev, mut curr) = (1i128, 2 * x);
        if n == 0 {
            return 1;
        }
        for k in 1..n {
            let next = 2 * x * curr - 2 * i128::from(k) * prev;
            prev = curr;
            curr = next;
        }
        curr
    }

    #[test]
    fn low_order() {
        let h0 = hermite_log(0, 3.7);
        assert_eq!((h0.sign, h0.log_abs), (1, 0.0));
        let h1 = hermite_log(1, 1.5);
        assert_eq!(h1.sign, 1);
        assert!((h1.log_abs - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn h10_at_origin() {
        assert_eq!(exact_at_integer(10, 0), -30240);
        let v = hermite_log(10, 0.0);
        assert_eq!(v.sign, -1);
        assert!((v.to_real() + 30240.0).abs() < 1e-9);
    }

    #[test]
    fn integer_points_match_exact() {
        for n in [3u32, 7, 15, 25] {
            for x in [-3i128, 1, 2, 4] {
                let exact = exact_at_integer(n, x) as f64;
                let got = hermite_log(n, x as f64).to_real();
                assert!(((got - exact) / exact).abs() < 1e-13, "n={n} x={x}");
            }
        }
    }
}
