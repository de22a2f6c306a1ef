//! Maximum likelihood for the urn composition `m` from one observed `Y`,
//! with `N` and `c` known and `m` treated as continuous.
//!
//! The kernel is
//!
//! ```text
//! L(m) = ln{ (m^(c) (N-m)^(c+y) + m^(c+y) (N-m)^(c)) / N^(2c+y) }
//! ```
//!
//! It is symmetric about `N/2`, where it always has a critical point. The
//! sign of `phi(N, c, y)` (half of `L''(N/2)`) decides whether that point
//! is the maximum or a dip between two mirrored maxima.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::{falling_factorial, SignedLogValue};

/// Width at which the golden-section stage stops.
pub const MLE_TOLERANCE: f64 = 1e-8;

/// Inward shift from a bracket end where the kernel is undefined.
pub const EDGE_SHRINK: f64 = 1e-6;

const SCAN_POINTS: usize = 256;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn check_counts(n: u64, c: u64, y: u64) -> Result<()> {
    if c == 0 || 2 * c + y > n {
        return Err(Error::InvalidArgument(format!("need c >= 1 and 2c + y <= N (N={n}, c={c}, y={y})")));
    }
    Ok(())
}

/// The two terms of the likelihood and the normaliser, in signed log space.
struct Terms {
    /// `m^(c) (N-m)^(c+y)`: `c`-th first-colour ball comes last.
    a: SignedLogValue,
    /// `m^(c+y) (N-m)^(c)`.
    b: SignedLogValue,
    denom: SignedLogValue,
}

fn terms(m: f64, n: u64, c: u64, y: u64) -> Terms {
    let rest = n as f64 - m;
    Terms {
        a: falling_factorial(m, c) * falling_factorial(rest, c + y),
        b: falling_factorial(m, c + y) * falling_factorial(rest, c),
        denom: falling_factorial(n as f64, 2 * c + y),
    }
}

/// The log-likelihood kernel at a real `m`.
pub fn loglik_kernel(m: f64, n: u64, c: u64, y: u64) -> Result<f64> {
    check_counts(n, c, y)?;
    let t = terms(m, n, c, y);
    let sum = t.a + t.b;
    if !sum.is_positive() {
        return Err(Error::Domain(format!("likelihood is not positive at m={m} (N={n}, c={c}, y={y})")));
    }
    Ok(sum.ln_abs() - t.denom.ln_abs())
}

/// `sum 1/(z-i)` and `sum 1/(z-i)^2` for `i < k`; `None` at a pole.
fn harmonic(z: f64, k: u64) -> Option<(f64, f64)> {
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for i in 0..k {
        let d = z - i as f64;
        if d == 0.0 {
            return None;
        }
        s1 += 1.0 / d;
        s2 += 1.0 / (d * d);
    }
    Some((s1, s2))
}

struct Derivatives {
    grad: f64,
    hess: f64,
}

fn derivatives(m: f64, n: u64, c: u64, y: u64) -> Result<Derivatives> {
    check_counts(n, c, y)?;
    let rest = n as f64 - m;
    let pole = || Error::Domain(format!("derivative pole at m={m} (N={n}, c={c}, y={y})"));
    let (m_c, m_c2) = harmonic(m, c).ok_or_else(pole)?;
    let (m_cy, m_cy2) = harmonic(m, c + y).ok_or_else(pole)?;
    let (r_c, r_c2) = harmonic(rest, c).ok_or_else(pole)?;
    let (r_cy, r_cy2) = harmonic(rest, c + y).ok_or_else(pole)?;

    let t = terms(m, n, c, y);
    let sum = t.a + t.b;
    if !sum.is_positive() {
        return Err(Error::Domain(format!("likelihood is not positive at m={m} (N={n}, c={c}, y={y})")));
    }
    let w_a = (t.a / sum).to_real();
    let w_b = (t.b / sum).to_real();

    // log-derivatives of each product, and their second derivatives over the product
    let da = m_c - r_cy;
    let db = m_cy - r_c;
    let dda = da * da - (m_c2 + r_cy2);
    let ddb = db * db - (m_cy2 + r_c2);

    let grad = w_a * da + w_b * db;
    let hess = w_a * dda + w_b * ddb - grad * grad;
    Ok(Derivatives { grad, hess })
}

/// First derivative of the kernel in `m`.
pub fn loglik_grad(m: f64, n: u64, c: u64, y: u64) -> Result<f64> {
    derivatives(m, n, c, y).map(|d| d.grad)
}

/// Second derivative of the kernel in `m`.
pub fn loglik_hess(m: f64, n: u64, c: u64, y: u64) -> Result<f64> {
    derivatives(m, n, c, y).map(|d| d.hess)
}

/// `sum_{k<k'<y} 1/((N/2-c-k)(N/2-c-k')) - sum_{i<c} 1/(N/2-i)^2`, which
/// has the sign of the kernel's curvature at `N/2`.
pub fn phi(n: u64, c: u64, y: u64) -> Result<f64> {
    check_counts(n, c, y)?;
    let half = n as f64 / 2.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for k in 0..y {
        let d = half - (c + k) as f64;
        if d == 0.0 {
            return Err(Error::Domain(format!("phi has a zero denominator at k={k} (N={n}, c={c}, y={y})")));
        }
        s1 += 1.0 / d;
        s2 += 1.0 / (d * d);
    }
    // sum over pairs k < k' from the square of the sum
    let pairs = 0.5 * (s1 * s1 - s2);
    let centre: f64 = (0..c).map(|i| (half - i as f64).powi(-2)).sum();
    Ok(pairs - centre)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    GlobalMaxAtHalf,
    LocalMinAtHalf,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::GlobalMaxAtHalf => "global_max_at_half",
            Classification::LocalMinAtHalf => "local_min_at_half",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPointReport {
    pub phi_value: f64,
    pub classification: Classification,
}

pub fn critical_point(n: u64, c: u64, y: u64) -> Result<CriticalPointReport> {
    let phi_value = phi(n, c, y)?;
    let classification = if phi_value < 0.0 { Classification::GlobalMaxAtHalf } else { Classification::LocalMinAtHalf };
    Ok(CriticalPointReport { phi_value, classification })
}

fn objective(n: u64, c: u64, y: u64) -> impl Fn(f64) -> f64 {
    move |m| loglik_kernel(m, n, c, y).unwrap_or(f64::NEG_INFINITY)
}

/// Golden-section maximisation of `f` on `[lo, hi]`.
fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Bisection for a sign change of `g` on `[lo, hi]`, or `None` if the
/// ends do not straddle a root.
fn bisect(g: &impl Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut g_lo = g(lo)?;
    let g_hi = g(hi)?;
    if g_lo == 0.0 {
        return Some(lo);
    }
    if g_lo.signum() == g_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid)?;
        if g_mid == 0.0 {
            return Some(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Maximum likelihood estimates of `m`: `{N/2}` when the centre is the
/// maximum, otherwise the mirrored pair `{N - m_hat, m_hat}` (the pmf cannot
/// tell `m` from `N - m`).
pub fn mle(n: u64, c: u64, y: u64) -> Result<Vec<f64>> {
    check_counts(n, c, y)?;
    let half = n as f64 / 2.0;
    match phi(n, c, y) {
        Ok(v) if v < 0.0 => return Ok(vec![half]),
        Ok(_) | Err(Error::Domain(_)) => {}
        Err(e) => return Err(e),
    }

    let f = objective(n, c, y);
    let mut lo = half;
    let mut hi = (n - c) as f64;
    if !f(lo).is_finite() {
        lo += EDGE_SHRINK;
    }
    if !f(hi).is_finite() {
        hi -= EDGE_SHRINK;
    }
    if hi <= lo {
        return Ok(vec![half]);
    }

    // bracket the best grid cell before the golden-section stage
    let step = (hi - lo) / SCAN_POINTS as f64;
    let best = (0..=SCAN_POINTS)
        .map(|i| lo + step * i as f64)
        .map(|m| (m, f(m)))
        .fold((lo, f64::NEG_INFINITY), |acc, (m, v)| if v > acc.1 { (m, v) } else { acc });
    if !best.1.is_finite() {
        return Err(Error::Domain(format!("likelihood undefined on [{lo}, {hi}] (N={n}, c={c}, y={y})")));
    }
    let a = (best.0 - step).max(lo);
    let b = (best.0 + step).min(hi);
    let mut m_hat = golden_max(&f, a, b, MLE_TOLERANCE);

    let grad = |m: f64| loglik_grad(m, n, c, y).ok();
    let w = 4.0 * MLE_TOLERANCE;
    if let Some(root) = bisect(&grad, (m_hat - w).max(lo), (m_hat + w).min(hi)) {
        m_hat = root;
    }

    if (m_hat - half).abs() <= MLE_TOLERANCE {
        return Ok(vec![half]);
    }
    Ok(vec![n as f64 - m_hat, m_hat])
}

/// An evenly spaced grid `lo, lo + step, ..., hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || step.is_nan() || step <= 0.0 || hi < lo {
            return Err(Error::InvalidArgument(format!("bad grid {lo}:{hi}:{step}")));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.lo + self.step * i as f64).collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Parses `lo:hi:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("grid '{s}' is not lo:hi:step"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums = parts.iter().map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        GridSpec::new(nums[0], nums[1], nums[2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodProfile {
    pub n: u64,
    pub c: u64,
    pub y: u64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub maximizers: Vec<f64>,
}

/// The kernel on a grid together with the maximisers.
pub fn profile(n: u64, c: u64, y: u64, grid: &GridSpec) -> Result<LikelihoodProfile> {
    let points = grid.points();
    let values = points.iter().map(|&m| loglik_kernel(m, n, c, y)).collect::<Result<Vec<_>>>()?;
    Ok(LikelihoodProfile { n, c, y, grid: points, values, maximizers: mle(n, c, y)? })
}
