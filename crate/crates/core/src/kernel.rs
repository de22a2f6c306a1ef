//! Signed log-space arithmetic.
//!
//! Every pmf and likelihood in this crate is a ratio of products of
//! falling factorials `z(z-1)...(z-k+1)`. Those products overflow `f64`
//! long before the ratios do, so values are carried as a sign and a
//! natural-log magnitude and only exponentiated at the API boundary.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

/// Relative magnitude below which a two-term difference is declared zero.
pub const CANCELLATION_THRESHOLD: f64 = 1e-13;

/// Falling factorials with more factors than this on an integer argument
/// go through [`log_factorial`] differences instead of a direct product.
const DIRECT_PRODUCT_MAX_FACTORS: u64 = 64;

/// A real number stored as `sign * exp(logmag)`.
///
/// `sign == 0` is exactly zero and its `logmag` is never read.
#[derive(Clone, Copy)]
pub struct SignedLogValue {
    sign: i8,
    logmag: f64,
}

impl SignedLogValue {
    pub const ZERO: Self = Self { sign: 0, logmag: f64::NEG_INFINITY };
    pub const ONE: Self = Self { sign: 1, logmag: 0.0 };

    /// Builds a value from its parts. `sign` is clamped to `{-1, 0, 1}`.
    pub fn new(sign: i8, logmag: f64) -> Self {
        match sign.cmp(&0) {
            Ordering::Equal => Self::ZERO,
            Ordering::Greater => Self { sign: 1, logmag },
            Ordering::Less => Self { sign: -1, logmag },
        }
    }

    /// A positive value with the given natural log.
    pub fn from_ln(logmag: f64) -> Self {
        if logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: 1, logmag }
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self { sign: if x > 0.0 { 1 } else { -1 }, logmag: x.abs().ln() }
        }
    }

    pub fn to_real(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logmag.exp(),
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.logmag
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(self) -> bool {
        self.sign > 0
    }

    /// `self / rhs`, or `None` when `rhs` is zero.
    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs.sign == 0 {
            None
        } else {
            Some(self * Self { sign: rhs.sign, logmag: -rhs.logmag })
        }
    }

    /// Raises to an integer power.
    pub fn powi(self, n: u64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && n % 2 == 1 { -1 } else { 1 };
        Self { sign, logmag: self.logmag * n as f64 }
    }
}

impl PartialEq for SignedLogValue {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.logmag == other.logmag)
    }
}

impl fmt::Debug for SignedLogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "+exp({})", self.logmag),
            _ => write!(f, "-exp({})", self.logmag),
        }
    }
}

impl Mul for SignedLogValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            Self::ZERO
        } else {
            Self { sign: self.sign * rhs.sign, logmag: self.logmag + rhs.logmag }
        }
    }
}

/// Panics on division by zero; use [`SignedLogValue::checked_div`] when the
/// divisor may vanish.
impl Div for SignedLogValue {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        self.checked_div(rhs).expect("division by signed-log zero")
    }
}

impl Neg for SignedLogValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self { sign: -self.sign, logmag: self.logmag }
    }
}

impl std::ops::Add for SignedLogValue {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        signed_log_add(self, rhs)
    }
}

/// Sum of two signed-log values with log-sum-exp stabilisation.
///
/// Opposite-signed operands whose difference falls below
/// [`CANCELLATION_THRESHOLD`] of the larger magnitude give exact zero.
pub fn signed_log_add(a: SignedLogValue, b: SignedLogValue) -> SignedLogValue {
    if a.sign == 0 {
        return b;
    }
    if b.sign == 0 {
        return a;
    }
    let (hi, lo) = if a.logmag >= b.logmag { (a, b) } else { (b, a) };
    let d = lo.logmag - hi.logmag;
    if hi.sign == lo.sign {
        SignedLogValue { sign: hi.sign, logmag: hi.logmag + d.exp().ln_1p() }
    } else {
        // 1 - e^d, computed without cancellation
        let rest = -d.exp_m1();
        if rest < CANCELLATION_THRESHOLD {
            SignedLogValue::ZERO
        } else {
            SignedLogValue { sign: hi.sign, logmag: hi.logmag + rest.ln() }
        }
    }
}

const LN_FACTORIAL_TABLE_MAX: u64 = 20;

/// `ln(n!)`. Exact (to rounding) from an integer table for `n <= 20`,
/// Stirling's series with four correction terms beyond.
pub fn log_factorial(n: u64) -> f64 {
    if n <= LN_FACTORIAL_TABLE_MAX {
        let f: u64 = (1..=n).product();
        return (f as f64).ln();
    }
    let x = (n + 1) as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/12x - 1/360x^3 + 1/1260x^5 - 1/1680x^7
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// The falling factorial `z (z-1) ... (z-k+1)`, with `z^(0) = 1`.
///
/// Non-integer `z` (and short products) are a direct product of `k` signed
/// factors, so the function is total over the reals. Long products on an
/// integer argument use factorial differences.
pub fn falling_factorial(z: f64, k: u64) -> SignedLogValue {
    if k == 0 {
        return SignedLogValue::ONE;
    }
    if z.fract() == 0.0 && k > DIRECT_PRODUCT_MAX_FACTORS && z.abs() < 9.0e15 {
        return falling_factorial_integer(z as i64, k);
    }
    let mut sign = 1i8;
    let mut logmag = 0.0;
    for i in 0..k {
        let factor = z - i as f64;
        if factor == 0.0 {
            return SignedLogValue::ZERO;
        }
        if factor < 0.0 {
            sign = -sign;
        }
        logmag += factor.abs().ln();
    }
    SignedLogValue { sign, logmag }
}

fn falling_factorial_integer(z: i64, k: u64) -> SignedLogValue {
    if z >= 0 {
        let z = z as u64;
        if z < k {
            // one of the factors is zero
            SignedLogValue::ZERO
        } else {
            SignedLogValue::from_ln(log_factorial(z) - log_factorial(z - k))
        }
    } else {
        // (-a)(-a-1)...(-a-k+1) = (-1)^k (a+k-1)! / (a-1)!
        let a = z.unsigned_abs();
        let sign = if k % 2 == 1 { -1 } else { 1 };
        SignedLogValue::new(sign, log_factorial(a + k - 1) - log_factorial(a - 1))
    }
}

/// The binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n >= 0`.
///
/// Negative `n` uses the generalised coefficient
/// `C(n, k) = (-1)^k C(k - n - 1, k)`.
pub fn log_binomial(n: i64, k: i64) -> SignedLogValue {
    if k < 0 {
        return SignedLogValue::ZERO;
    }
    let k_u = k as u64;
    if n >= 0 {
        if k > n {
            return SignedLogValue::ZERO;
        }
        let n_u = n as u64;
        SignedLogValue::from_ln(log_factorial(n_u) - log_factorial(k_u) - log_factorial(n_u - k_u))
    } else {
        let upper = (k - n - 1) as u64;
        let mag = log_factorial(upper) - log_factorial(k_u) - log_factorial(upper - k_u);
        SignedLogValue::new(if k % 2 == 1 { -1 } else { 1 }, mag)
    }
}
