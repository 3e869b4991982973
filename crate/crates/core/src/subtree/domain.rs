use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// The arithmetic the rerooting DP needs: a commutative semiring with a
/// successor and an order. Exact counts and natural-log magnitudes both fit.
pub trait CountDomain {
    type Value: Clone + Debug + Send + Sync;

    fn zero() -> Self::Value;
    fn one() -> Self::Value;
    fn add(a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// `1 + a`.
    fn succ(a: &Self::Value) -> Self::Value;
    fn cmp(a: &Self::Value, b: &Self::Value) -> Ordering;
    /// Equality for core detection; the log domain allows rounding slack.
    fn tie(a: &Self::Value, b: &Self::Value) -> bool {
        Self::cmp(a, b) == Ordering::Equal
    }
    /// `a` times `small`; used only for vertex-count weights.
    fn scale(a: &Self::Value, small: u64) -> Self::Value;
}

/// Exact arbitrary-precision counts.
#[derive(Debug, Clone, Copy)]
pub struct Exact;

impl CountDomain for Exact {
    type Value = BigUint;

    fn zero() -> BigUint {
        BigUint::zero()
    }
    fn one() -> BigUint {
        BigUint::one()
    }
    fn add(a: &BigUint, b: &BigUint) -> BigUint {
        a + b
    }
    fn mul(a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn succ(a: &BigUint) -> BigUint {
        a + 1u32
    }
    fn cmp(a: &BigUint, b: &BigUint) -> Ordering {
        a.cmp(b)
    }
    fn scale(a: &BigUint, small: u64) -> BigUint {
        a * small
    }
}

/// Natural log of a nonnegative count; `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogCount(pub f64);

impl LogCount {
    pub fn ln(self) -> f64 {
        self.0
    }
}

/// Counts carried as natural logarithms in `f64`.
#[derive(Debug, Clone, Copy)]
pub struct LogDomain;

/// `ln(e^a + e^b)`.
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

impl CountDomain for LogDomain {
    type Value = LogCount;

    fn zero() -> LogCount {
        LogCount(f64::NEG_INFINITY)
    }
    fn one() -> LogCount {
        LogCount(0.0)
    }
    fn add(a: &LogCount, b: &LogCount) -> LogCount {
        LogCount(log_add(a.0, b.0))
    }
    fn mul(a: &LogCount, b: &LogCount) -> LogCount {
        if a.0 == f64::NEG_INFINITY || b.0 == f64::NEG_INFINITY {
            return LogCount(f64::NEG_INFINITY);
        }
        LogCount(a.0 + b.0)
    }
    fn succ(a: &LogCount) -> LogCount {
        LogCount(log_add(a.0, 0.0))
    }
    fn cmp(a: &LogCount, b: &LogCount) -> Ordering {
        a.0.total_cmp(&b.0)
    }
    fn tie(a: &LogCount, b: &LogCount) -> bool {
        (a.0 - b.0).abs() <= 1e-12 * a.0.abs().max(1.0)
    }
    fn scale(a: &LogCount, small: u64) -> LogCount {
        if small == 0 {
            return LogCount(f64::NEG_INFINITY);
        }
        LogCount(a.0 + (small as f64).ln())
    }
}
