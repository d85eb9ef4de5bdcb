use std::ops::{Div, Mul, Neg};

use serde::{Deserialize, Serialize};

/// A real number stored as `sign * exp(log_abs)`.
///
/// Products and quotients of factorials, powers and polynomial values that
/// would overflow an `f64` are kept in this form until the very end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScaledValue {
    pub sign: i8,
    /// Natural log of the magnitude. Ignored when `sign == 0`.
    pub log_abs: f64,
}

impl LogScaledValue {
    pub const ZERO: Self = Self {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self {
        sign: 1,
        log_abs: 0.0,
    };

    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    /// Positive value from its logarithm.
    pub fn from_log(log_abs: f64) -> Self {
        Self::new(1, log_abs)
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                log_abs: x.abs().ln(),
            }
        }
    }

    pub fn to_real(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        if self.is_zero() {
            self
        } else {
            Self {
                sign: 1,
                log_abs: self.log_abs,
            }
        }
    }

    /// Square of the value; always non-negative.
    pub fn square(self) -> Self {
        self.powi(2)
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        let sign = if k % 2 == 0 { 1 } else { self.sign };
        Self {
            sign,
            log_abs: self.log_abs * f64::from(k),
        }
    }

    /// Square root of a non-negative value. Negative input yields NaN magnitude.
    pub fn sqrt(self) -> Self {
        match self.sign {
            0 => Self::ZERO,
            1 => Self {
                sign: 1,
                log_abs: 0.5 * self.log_abs,
            },
            _ => Self {
                sign: 1,
                log_abs: f64::NAN,
            },
        }
    }

    /// Multiply by `exp(log_factor)`.
    pub fn scale_log(self, log_factor: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            Self {
                sign: self.sign,
                log_abs: self.log_abs + log_factor,
            }
        }
    }
}

impl Mul for LogScaledValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            Self::ZERO
        } else {
            Self {
                sign: self.sign * rhs.sign,
                log_abs: self.log_abs + rhs.log_abs,
            }
        }
    }
}

impl Div for LogScaledValue {
    type Output = Self;

    /// Division by zero yields an infinite magnitude with the numerator's sign.
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        if rhs.is_zero() {
            return Self {
                sign: self.sign,
                log_abs: f64::INFINITY,
            };
        }
        Self {
            sign: self.sign * rhs.sign,
            log_abs: self.log_abs - rhs.log_abs,
        }
    }
}

impl Neg for LogScaledValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            log_abs: self.log_abs,
        }
    }
}

/// Mantissa/exponent pair used while running a three-term recurrence whose
/// terms can leave the `f64` range. Rescaling is by exact powers of two, so the
/// scaled recurrence produces the same mantissas as the plain one would.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledPair {
    pub prev: f64,
    pub curr: f64,
    /// Both values are multiplied by `2^exp2` to obtain the true ones.
    pub exp2: i64,
}

const RESCALE_HIGH: f64 = 1e150;
const RESCALE_LOW: f64 = 1e-150;
const STEP_BITS: i32 = 500;

impl ScaledPair {
    pub fn new(prev: f64, curr: f64) -> Self {
        let mut pair = Self {
            prev,
            curr,
            exp2: 0,
        };
        pair.rebalance();
        pair
    }

    /// Shift in a newly computed term.
    pub fn push(&mut self, next: f64) {
        self.prev = self.curr;
        self.curr = next;
        self.rebalance();
    }

    fn rebalance(&mut self) {
        let down = 2f64.powi(-STEP_BITS);
        let up = 2f64.powi(STEP_BITS);
        while self.curr.abs() > RESCALE_HIGH || self.prev.abs() > RESCALE_HIGH {
            self.prev *= down;
            self.curr *= down;
            self.exp2 += i64::from(STEP_BITS);
        }
        while (self.curr != 0.0 || self.prev != 0.0)
            && self.curr.abs() < RESCALE_LOW
            && self.prev.abs() < RESCALE_LOW
        {
            self.prev *= up;
            self.curr *= up;
            self.exp2 -= i64::from(STEP_BITS);
        }
    }

    pub fn current(&self) -> LogScaledValue {
        LogScaledValue::from_real(self.curr).scale_log(self.exp2 as f64 * std::f64::consts::LN_2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_ignores_log_abs() {
        let z = LogScaledValue::new(0, 12.0);
        assert!(z.is_zero());
        assert_eq!(z.to_real(), 0.0);
        assert_eq!((z * LogScaledValue::from_real(3.0)).to_real(), 0.0);
    }

    #[test]
    fn arithmetic_matches_reals() {
        let a = LogScaledValue::from_real(-2.5);
        let b = LogScaledValue::from_real(4.0);
        assert!(((a * b).to_real() + 10.0).abs() < 1e-14);
        assert!(((a / b).to_real() + 0.625).abs() < 1e-15);
        assert!((b.sqrt().to_real() - 2.0).abs() < 1e-15);
        assert!((a.square().to_real() - 6.25).abs() < 1e-14);
        assert_eq!((-a).sign, 1);
    }

    #[test]
    fn scaled_pair_survives_overflow() {
        let mut pair = ScaledPair::new(1.0, 1e200);
        pair.push(pair.curr * 1e200);
        let v = pair.current();
        assert_eq!(v.sign, 1);
        assert!((v.log_abs - 400.0 * std::f64::consts::LN_10).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn round_trip(x in prop::num::f64::NORMAL) {
            let y = LogScaledValue::from_real(x).to_real();
            prop_assert!(((y - x) / x).abs() <= 1e-15 * x.abs().ln().abs().max(1.0));
        }

        #[test]
        fn round_trip_moderate(mag in 0.01f64..100.0, neg in any::<bool>()) {
            let x = if neg { -mag } else { mag };
            let y = LogScaledValue::from_real(x).to_real();
            prop_assert!(((y - x) / x).abs() < 1e-15);
        }
    }
}
