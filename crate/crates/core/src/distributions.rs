//! Exact pmfs for the six negative-binomial-type sampling schemes.
//!
//! | stopping rule                 | Bernoulli (infinite) | urn (finite)   |
//! |-------------------------------|----------------------|----------------|
//! | `c` successes                 | [`nb_pmf`]           | [`nh_pmf`]     |
//! | `c` of either outcome         | [`minnb_pmf`]        | [`minnh_pmf`]  |
//! | `c` of both outcomes          | [`maxnb_pmf`]        | [`maxnh_pmf`]  |
//!
//! In every case `Y` counts the draws beyond the minimum the rule needs.
//! Out-of-support `y` has probability zero.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::approximations::ApproxKind;
use crate::error::{Error, Result};
use crate::kernel::{falling_factorial, log_binomial, log_factorial, SignedLogValue};

/// Tail mass left out when tabulating an infinite-support pmf.
pub const TAIL_MASS: f64 = 1e-12;

/// Hard cap on the tabulated support of infinite-support pmfs.
const MAX_TRUNCATION: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistKind {
    NegBinomial,
    MaxNegBinomial,
    MinNegBinomial,
    NegHypergeometric,
    MinNegHypergeometric,
    MaxNegHypergeometric,
}

impl DistKind {
    pub const ALL: [DistKind; 6] = [
        DistKind::NegBinomial,
        DistKind::MaxNegBinomial,
        DistKind::MinNegBinomial,
        DistKind::NegHypergeometric,
        DistKind::MinNegHypergeometric,
        DistKind::MaxNegHypergeometric,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DistKind::NegBinomial => "nb",
            DistKind::MaxNegBinomial => "maxnb",
            DistKind::MinNegBinomial => "minnb",
            DistKind::NegHypergeometric => "nh",
            DistKind::MinNegHypergeometric => "minnh",
            DistKind::MaxNegHypergeometric => "maxnh",
        }
    }

    /// True for the finite-population (urn) schemes.
    pub fn is_urn(self) -> bool {
        matches!(self, DistKind::NegHypergeometric | DistKind::MinNegHypergeometric | DistKind::MaxNegHypergeometric)
    }

    pub fn has_finite_support(self) -> bool {
        self.is_urn() || self == DistKind::MinNegBinomial
    }
}

impl fmt::Display for DistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for DistKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown distribution '{s}'")))
    }
}

/// Urn composition: `n` balls, `m` of the first colour, stop rule count `c`.
///
/// Only triples with `1 <= c <= m < n` and `c <= n - m` can be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UrnParams {
    n: u64,
    m: u64,
    c: u64,
}

impl UrnParams {
    pub fn new(n: u64, m: u64, c: u64) -> Result<Self> {
        if c >= 1 && c <= m && m < n && c <= n - m {
            Ok(Self { n, m, c })
        } else {
            Err(Error::InvalidUrn { n, m, c })
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// The same urn with the colours relabelled (`m -> n - m`).
    pub fn swapped(&self) -> Self {
        Self { n: self.n, m: self.n - self.m, c: self.c }
    }

    /// `c = m = n/2`: every ball is drawn and `Y = 0` surely.
    pub fn is_degenerate(&self) -> bool {
        self.c == self.m && 2 * self.m == self.n
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliParams {
    c: u64,
    p: f64,
}

impl BernoulliParams {
    pub fn new(c: u64, p: f64) -> Result<Self> {
        if c >= 1 && p > 0.0 && p < 1.0 {
            Ok(Self { c, p })
        } else {
            Err(Error::InvalidBernoulli { c, p })
        }
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    Urn(UrnParams),
    Bernoulli(BernoulliParams),
}

impl From<UrnParams> for Params {
    fn from(p: UrnParams) -> Self {
        Params::Urn(p)
    }
}

impl From<BernoulliParams> for Params {
    fn from(p: BernoulliParams) -> Self {
        Params::Bernoulli(p)
    }
}

impl Params {
    fn urn(&self, kind: DistKind) -> Result<UrnParams> {
        match self {
            Params::Urn(u) => Ok(*u),
            Params::Bernoulli(_) => Err(Error::InvalidArgument(format!("{kind} needs urn parameters (N, m, c)"))),
        }
    }

    fn bernoulli(&self, kind: DistKind) -> Result<BernoulliParams> {
        match self {
            Params::Bernoulli(b) => Ok(*b),
            Params::Urn(_) => Err(Error::InvalidArgument(format!("{kind} needs Bernoulli parameters (c, p)"))),
        }
    }
}

/// Where the probabilities in a [`PmfTable`] came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Origin {
    Exact,
    Empirical { trials: u64 },
    Approximation(ApproxKind),
}

/// A pmf over the contiguous support `0..probs.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable {
    kind: DistKind,
    params: Params,
    origin: Origin,
    truncated_at: Option<u64>,
    probs: Vec<f64>,
}

impl PmfTable {
    pub fn new(kind: DistKind, params: Params, origin: Origin, truncated_at: Option<u64>, probs: Vec<f64>) -> Self {
        Self { kind, params, origin, truncated_at, probs }
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Upper bound of the tabulated support when the true support is infinite.
    pub fn truncated_at(&self) -> Option<u64> {
        self.truncated_at
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max_y(&self) -> u64 {
        self.probs.len().saturating_sub(1) as u64
    }

    pub fn ys(&self) -> std::ops::Range<u64> {
        0..self.probs.len() as u64
    }

    /// Probability at `y`, zero outside the table.
    pub fn prob(&self, y: u64) -> f64 {
        usize::try_from(y).ok().and_then(|i| self.probs.get(i)).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs.iter().enumerate().map(|(y, &p)| (y as u64, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Rounding in log space can push a certain event a few ulps past one.
fn as_prob(ln: f64) -> f64 {
    ln.exp().min(1.0)
}

/// Negative binomial: failures before the `c`-th success.
pub fn nb_pmf(params: BernoulliParams, y: u64) -> f64 {
    let BernoulliParams { c, p } = params;
    let ln = log_binomial((c + y - 1) as i64, (c - 1) as i64).ln_abs() + c as f64 * p.ln() + y as f64 * params.q().ln();
    as_prob(ln)
}

/// Maximum negative binomial: extra trials beyond `2c` to see `c` of each outcome.
pub fn maxnb_pmf(params: BernoulliParams, y: u64) -> f64 {
    let BernoulliParams { c, p } = params;
    let q = params.q();
    let tails = SignedLogValue::from_ln(y as f64 * p.ln()) + SignedLogValue::from_ln(y as f64 * q.ln());
    let ln = log_binomial((2 * c + y - 1) as i64, (c - 1) as i64).ln_abs() + tails.ln_abs() + c as f64 * (p * q).ln();
    as_prob(ln)
}

/// Minimum negative binomial (riff-shuffle): extra trials beyond `c` to see
/// `c` of either outcome. Supported on `0..c`.
pub fn minnb_pmf(params: BernoulliParams, y: u64) -> f64 {
    let BernoulliParams { c, p } = params;
    if y >= c {
        return 0.0;
    }
    let (lp, lq) = (p.ln(), params.q().ln());
    let terms =
        SignedLogValue::from_ln(c as f64 * lp + y as f64 * lq) + SignedLogValue::from_ln(y as f64 * lp + c as f64 * lq);
    as_prob(log_binomial((c + y - 1) as i64, (c - 1) as i64).ln_abs() + terms.ln_abs())
}

/// Negative hypergeometric: second-colour draws before the `c`-th
/// first-colour ball. Supported on `0..=N-m`.
///
/// The mean is `c (N - m) / (m + 1)`; [`mean`] sums the table rather than
/// using any closed form.
pub fn nh_pmf(params: UrnParams, y: u64) -> f64 {
    let UrnParams { n, m, c } = params;
    if y > n - m {
        return 0.0;
    }
    let (n, m, c, y) = (n as i64, m as i64, c as i64, y as i64);
    let v = log_binomial(c + y - 1, c - 1) * log_binomial(n - c - y, m - c) / log_binomial(n, m);
    as_prob(v.ln_abs())
}

/// Minimum negative hypergeometric: extra draws beyond `c` until either
/// colour reaches `c`. Supported on `0..c`.
pub fn minnh_pmf(params: UrnParams, y: u64) -> f64 {
    let UrnParams { n, m, c } = params;
    if y >= c {
        return 0.0;
    }
    let (n, m, c, y) = (n as i64, m as i64, c as i64, y as i64);
    let ways = log_binomial(m, c) * log_binomial(n - m, y) + log_binomial(m, y) * log_binomial(n - m, c);
    let v = log_binomial(c + y - 1, c - 1) * ways / (log_binomial(c + y, c) * log_binomial(n, c + y));
    as_prob(v.ln_abs())
}

/// Largest `y` with positive maximum negative hypergeometric mass.
pub fn maxnh_max_y(params: UrnParams) -> u64 {
    let UrnParams { n, m, c } = params;
    (m - c).max(n - m - c)
}

/// `ln Pr[Y = y]` for the maximum negative hypergeometric distribution, in
/// falling-factorial form; `-inf` outside the support.
pub fn maxnh_ln_pmf(params: UrnParams, y: u64) -> f64 {
    if y > maxnh_max_y(params) {
        return f64::NEG_INFINITY;
    }
    let UrnParams { n, m, c } = params;
    let (nf, mf, rest) = (n as f64, m as f64, (n - m) as f64);
    let paths = falling_factorial(mf, c + y) * falling_factorial(rest, c)
        + falling_factorial(mf, c) * falling_factorial(rest, c + y);
    let v = log_binomial((2 * c + y - 1) as i64, (c - 1) as i64) * paths / falling_factorial(nf, 2 * c + y);
    let ln = v.ln_abs();
    debug_assert!(dual_forms_agree(params, y, ln), "maxnh pmf forms disagree at {params:?}, y={y}");
    ln
}

/// Same distribution written with binomial coefficients; an independent
/// evaluation path used to cross-check [`maxnh_pmf`].
pub fn maxnh_ln_pmf_binomial_form(params: UrnParams, y: u64) -> f64 {
    if y > maxnh_max_y(params) {
        return f64::NEG_INFINITY;
    }
    let (n, m, c, y) = (params.n as i64, params.m as i64, params.c as i64, y as i64);
    let pairs = log_binomial(m, c + y) * log_binomial(n - m, c) + log_binomial(m, c) * log_binomial(n - m, c + y);
    let weight = (c as f64 / (2 * c + y) as f64).ln();
    weight + (pairs / log_binomial(n, 2 * c + y)).ln_abs()
}

fn dual_forms_agree(params: UrnParams, y: u64, ln: f64) -> bool {
    let other = maxnh_ln_pmf_binomial_form(params, y);
    if ln == other {
        return true;
    }
    // Both forms difference log-factorials of size ln(N!); rounding there
    // sets the attainable agreement for large N.
    let tol = 1e-12 + 32.0 * f64::EPSILON * log_factorial(params.n);
    (ln - other).abs() <= tol
}

/// Maximum negative hypergeometric: extra draws beyond `2c` until both
/// colours reach `c`.
pub fn maxnh_pmf(params: UrnParams, y: u64) -> f64 {
    as_prob(maxnh_ln_pmf(params, y))
}

/// Closed form for `Pr[Y = 0]` of the maximum negative hypergeometric.
pub fn maxnh_p0(params: UrnParams) -> f64 {
    let (n, m, c) = (params.n as i64, params.m as i64, params.c as i64);
    as_prob((log_binomial(n - 2 * c, m - c) * log_binomial(2 * c, c) / log_binomial(n, m)).ln_abs())
}

/// Evaluates `kind`'s pmf at `y`. Fails only when `params` is the wrong
/// family for `kind`.
pub fn pmf(kind: DistKind, params: &Params, y: u64) -> Result<f64> {
    Ok(match kind {
        DistKind::NegBinomial => nb_pmf(params.bernoulli(kind)?, y),
        DistKind::MaxNegBinomial => maxnb_pmf(params.bernoulli(kind)?, y),
        DistKind::MinNegBinomial => minnb_pmf(params.bernoulli(kind)?, y),
        DistKind::NegHypergeometric => nh_pmf(params.urn(kind)?, y),
        DistKind::MinNegHypergeometric => minnh_pmf(params.urn(kind)?, y),
        DistKind::MaxNegHypergeometric => maxnh_pmf(params.urn(kind)?, y),
    })
}

/// Support of `kind`. Infinite supports are cut at the smallest `T` whose
/// upper tail carries less than [`TAIL_MASS`].
pub fn support(kind: DistKind, params: &Params) -> Result<RangeInclusive<u64>> {
    let hi = match kind {
        DistKind::NegHypergeometric => {
            let u = params.urn(kind)?;
            u.n - u.m
        }
        DistKind::MinNegHypergeometric => params.urn(kind)?.c - 1,
        DistKind::MaxNegHypergeometric => maxnh_max_y(params.urn(kind)?),
        DistKind::MinNegBinomial => params.bernoulli(kind)?.c - 1,
        DistKind::NegBinomial | DistKind::MaxNegBinomial => {
            let b = params.bernoulli(kind)?;
            tail_bound(|y| pmf(kind, &Params::Bernoulli(b), y).unwrap_or(0.0))
        }
    };
    Ok(0..=hi)
}

fn tail_bound(f: impl Fn(u64) -> f64) -> u64 {
    let mut cum = 0.0;
    let mut y = 0;
    loop {
        cum += f(y);
        if 1.0 - cum < TAIL_MASS || y >= MAX_TRUNCATION {
            return y;
        }
        y += 1;
    }
}

/// The exact pmf tabulated over its (possibly truncated) support.
pub fn pmf_table(kind: DistKind, params: impl Into<Params>) -> Result<PmfTable> {
    let params = params.into();
    let range = support(kind, &params)?;
    let hi = *range.end();
    let probs = range.map(|y| pmf(kind, &params, y)).collect::<Result<Vec<_>>>()?;
    let truncated_at = (!kind.has_finite_support()).then_some(hi);
    Ok(PmfTable::new(kind, params, Origin::Exact, truncated_at, probs))
}

/// `Pr[Y <= y]`.
pub fn cdf(table: &PmfTable, y: i64) -> f64 {
    if y < 0 {
        return 0.0;
    }
    let end = usize::try_from(y).map_or(table.len(), |y| (y + 1).min(table.len()));
    table.probs[..end].iter().sum()
}

/// Smallest `y` with `cdf(y) >= u`.
pub fn quantile(table: &PmfTable, u: f64) -> Result<u64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("quantile level {u} is outside [0, 1]")));
    }
    let mut cum = 0.0;
    for (y, p) in table.iter() {
        cum += p;
        if cum >= u {
            return Ok(y);
        }
    }
    // rounding left the total a hair below u
    Ok(table.max_y())
}

pub fn mean(table: &PmfTable) -> f64 {
    table.iter().map(|(y, p)| y as f64 * p).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn urn(n: u64, m: u64, c: u64) -> UrnParams {
        UrnParams::new(n, m, c).unwrap()
    }

    fn bern(c: u64, p: f64) -> BernoulliParams {
        BernoulliParams::new(c, p).unwrap()
    }

    /// All valid urn triples with `n <= max_n`.
    fn triples(max_n: u64) -> impl Iterator<Item = UrnParams> {
        (2..=max_n).flat_map(|n| (1..n).flat_map(move |m| (1..=m).filter_map(move |c| UrnParams::new(n, m, c).ok())))
    }

    #[test]
    fn parameter_validation() {
        assert!(UrnParams::new(10, 2, 3).is_err());
        assert!(UrnParams::new(10, 8, 3).is_err());
        assert!(UrnParams::new(10, 10, 1).is_err());
        assert!(UrnParams::new(10, 5, 0).is_err());
        assert!(UrnParams::new(6, 3, 3).unwrap().is_degenerate());
        assert!(BernoulliParams::new(3, 1.0).is_err());
        assert!(BernoulliParams::new(0, 0.5).is_err());
        assert!("MAXNH".parse::<DistKind>().is_ok());
        assert!("foo".parse::<DistKind>().is_err());
    }

    #[test]
    fn negative_binomial_examples() {
        assert_relative_eq!(nb_pmf(bern(1, 0.5), 2), 0.125, max_relative = 1e-14);
        assert_relative_eq!(nb_pmf(bern(3, 0.4), 0), 0.064, max_relative = 1e-14);
        // strings of length 3 ending in the second success: SFS, FSS
        assert_relative_eq!(nb_pmf(bern(2, 0.5), 1), 0.25, max_relative = 1e-14);
    }

    #[test]
    fn maximum_negative_binomial_examples() {
        assert_relative_eq!(maxnb_pmf(bern(3, 0.4), 0), 0.276480, max_relative = 1e-12);
        assert_relative_eq!(maxnb_pmf(bern(3, 0.4), 1), 0.207360, max_relative = 1e-12);
        for c in 1..6 {
            for y in 0..=20 {
                assert_relative_eq!(maxnb_pmf(bern(c, 0.3), y), maxnb_pmf(bern(c, 0.7), y), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn minimum_negative_binomial_examples() {
        assert_relative_eq!(minnb_pmf(bern(1, 0.37), 0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(minnb_pmf(bern(2, 0.5), 0), 0.5, max_relative = 1e-14);
        assert_relative_eq!(minnb_pmf(bern(2, 0.5), 1), 0.5, max_relative = 1e-14);
        let total: f64 = (0..6).map(|y| minnb_pmf(bern(6, 1.0 / 3.0), y)).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-12);
        assert_eq!(minnb_pmf(bern(6, 0.3), 6), 0.0);
    }

    #[test]
    fn negative_hypergeometric_examples() {
        assert_relative_eq!(nh_pmf(urn(3, 2, 1), 0), 2.0 / 3.0, max_relative = 1e-13);
        for y in 0..=2 {
            assert_relative_eq!(nh_pmf(urn(4, 2, 2), y), (y + 1) as f64 / 6.0, max_relative = 1e-13);
        }
        assert_eq!(nh_pmf(urn(4, 2, 2), 3), 0.0);
        assert_relative_eq!(nh_pmf(urn(3, 2, 1), 0) + nh_pmf(urn(3, 2, 1), 1), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn minimum_negative_hypergeometric_examples() {
        assert_relative_eq!(minnh_pmf(urn(4, 2, 1), 0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(minnh_pmf(urn(5, 2, 2), 0), 0.4, max_relative = 1e-13);
        assert_relative_eq!(minnh_pmf(urn(5, 2, 2), 1), 0.6, max_relative = 1e-13);
        assert_eq!(minnh_pmf(urn(5, 2, 2), 2), 0.0);
    }

    #[test]
    fn maximum_negative_hypergeometric_examples() {
        assert!((maxnh_pmf(urn(15, 6, 3), 0) - 0.33566).abs() < 5e-6);
        assert_relative_eq!(maxnh_pmf(urn(6, 3, 3), 0), 1.0, max_relative = 1e-13);
        let p = urn(5, 1, 1);
        assert_relative_eq!(maxnh_pmf(p, 0), 0.4, max_relative = 1e-13);
        for y in 1..=3 {
            assert_relative_eq!(maxnh_pmf(p, y), 0.2, max_relative = 1e-13);
        }
        assert_eq!(maxnh_pmf(p, 4), 0.0);
        for y in 0..=20 {
            assert_relative_eq!(maxnh_pmf(urn(20, 8, 3), y), maxnh_pmf(urn(20, 12, 3), y), max_relative = 1e-12);
        }
    }

    #[test]
    fn closed_form_p0() {
        assert_relative_eq!(maxnh_p0(urn(15, 6, 3)), 84.0 * 20.0 / 5005.0, max_relative = 1e-13);
        assert_relative_eq!(maxnh_p0(urn(8, 4, 4)), 1.0, max_relative = 1e-13);
        assert!((maxnh_p0(urn(50, 25, 20)) - 0.27479).abs() < 1e-5);
        for p in triples(40) {
            assert_relative_eq!(maxnh_p0(p), maxnh_pmf(p, 0), max_relative = 1e-12);
        }
    }

    #[test]
    fn special_cases() {
        for n in 3..40u64 {
            let p = urn(n, 1, 1);
            assert_relative_eq!(maxnh_pmf(p, 0), 2.0 / n as f64, max_relative = 1e-12);
            for y in 1..=n - 2 {
                assert_relative_eq!(maxnh_pmf(p, y), 1.0 / n as f64, max_relative = 1e-12);
                assert_relative_eq!(maxnh_pmf(urn(n, n - 1, 1), y), 1.0 / n as f64, max_relative = 1e-12);
            }
        }
        for m in 1..20u64 {
            let p = urn(2 * m + 1, m, m);
            let d = (2 * m + 1) as f64;
            assert_relative_eq!(maxnh_pmf(p, 0), (m + 1) as f64 / d, max_relative = 1e-12);
            assert_relative_eq!(maxnh_pmf(p, 1), m as f64 / d, max_relative = 1e-12);
            // colours relabelled: m = c + 1, N = 2c + 1
            let q = urn(2 * m + 1, m + 1, m);
            assert_relative_eq!(maxnh_pmf(q, 0), (m + 1) as f64 / d, max_relative = 1e-12);
            assert_relative_eq!(maxnh_pmf(q, 1), m as f64 / d, max_relative = 1e-12);
        }
    }

    #[test]
    fn normalisation_up_to_forty() {
        for p in triples(40) {
            for kind in [DistKind::NegHypergeometric, DistKind::MinNegHypergeometric, DistKind::MaxNegHypergeometric] {
                let t = pmf_table(kind, p).unwrap();
                assert!((t.total() - 1.0).abs() < 1e-10, "{kind} {p:?}");
                let bad = t.probs().iter().position(|&x| !(0.0..=1.0).contains(&x));
                assert!(bad.is_none(), "{kind} {p:?} y={bad:?} {:?}", bad.map(|y| t.probs()[y]));
            }
        }
    }

    #[test]
    fn dual_forms_agree_up_to_forty() {
        for p in triples(40) {
            for y in 0..=maxnh_max_y(p) {
                let a = maxnh_ln_pmf(p, y);
                let b = maxnh_ln_pmf_binomial_form(p, y);
                assert!((a - b).abs() <= 1e-12, "{p:?} y={y}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn supports() {
        let p: Params = urn(15, 6, 3).into();
        assert_eq!(support(DistKind::MaxNegHypergeometric, &p).unwrap(), 0..=6);
        assert_eq!(support(DistKind::MinNegHypergeometric, &p).unwrap(), 0..=2);
        assert_eq!(support(DistKind::NegHypergeometric, &p).unwrap(), 0..=9);
        assert_eq!(support(DistKind::MaxNegHypergeometric, &urn(10, 5, 5).into()).unwrap(), 0..=0);
        assert!(support(DistKind::NegBinomial, &p).is_err());
    }

    #[test]
    fn truncated_tables() {
        let t = pmf_table(DistKind::MaxNegBinomial, bern(3, 0.4)).unwrap();
        let hi = t.truncated_at().unwrap();
        assert_eq!(hi, t.max_y());
        assert!(1.0 - t.total() < TAIL_MASS);
        let before: f64 = t.probs()[..t.len() - 1].iter().sum();
        assert!(1.0 - before >= TAIL_MASS);
        let fig = [
            0.276480000,
            0.207360000,
            0.150958080,
            0.108380160,
            0.077237453,
            0.054743040,
            0.038587761,
            0.027035763,
            0.018817485,
            0.013007353,
            0.008928989,
            0.006087946,
            0.004124032,
        ];
        for (y, &v) in fig.iter().enumerate() {
            assert!((t.prob(y as u64) - v).abs() < 1e-6);
        }
        let nb = pmf_table(DistKind::NegBinomial, bern(1, 0.5)).unwrap();
        assert!((mean(&nb) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_quantile_mean() {
        let t = pmf_table(DistKind::MaxNegHypergeometric, urn(15, 6, 3)).unwrap();
        assert_eq!(t.len(), 7);
        assert!((cdf(&t, 6) - 1.0).abs() < 1e-10);
        assert_eq!(cdf(&t, -1), 0.0);
        assert!((cdf(&t, 100) - 1.0).abs() < 1e-10);
        assert_eq!(quantile(&t, 0.0).unwrap(), 0);
        assert_eq!(quantile(&t, 0.5).unwrap(), 1);
        assert_eq!(quantile(&t, 1.0).unwrap(), 6);
        assert!(matches!(quantile(&t, 1.5), Err(Error::Domain(_))));
        assert!(quantile(&t, -0.1).is_err());

        let nh = pmf_table(DistKind::NegHypergeometric, urn(3, 2, 1)).unwrap();
        assert_relative_eq!(mean(&nh), 1.0 / 3.0, max_relative = 1e-12);
        let degenerate = pmf_table(DistKind::MaxNegHypergeometric, urn(6, 3, 3)).unwrap();
        assert_eq!(mean(&degenerate), 0.0);
    }

    #[test]
    fn nh_mean_is_c_rest_over_m_plus_one() {
        for p in triples(30) {
            let t = pmf_table(DistKind::NegHypergeometric, p).unwrap();
            let closed = (p.c() * (p.n() - p.m())) as f64 / (p.m() + 1) as f64;
            assert_relative_eq!(mean(&t), closed, max_relative = 1e-10);
        }
    }

    #[test]
    fn large_population_tables_stay_finite() {
        let t = pmf_table(DistKind::MaxNegHypergeometric, urn(10_000, 100, 2)).unwrap();
        assert!((t.total() - 1.0).abs() < 1e-9);
        assert!(t.probs().iter().all(|p| p.is_finite()));
    }

    proptest! {
        #[test]
        fn relabelling_colours_preserves_maxnh(n in 2u64..120, m_frac in 0.0f64..1.0, c_frac in 0.0f64..1.0) {
            let m = 1 + ((n - 1) as f64 * m_frac) as u64 % (n - 1);
            let c = 1 + ((m.min(n - m) as f64) * c_frac) as u64 % m.min(n - m);
            let p = urn(n, m, c);
            for y in 0..=maxnh_max_y(p) {
                let (a, b) = (maxnh_ln_pmf(p, y), maxnh_ln_pmf(p.swapped(), y));
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn urn_tables_sum_to_one(n in 2u64..600, m_frac in 0.0f64..1.0, c_frac in 0.0f64..1.0) {
            let m = 1 + ((n - 1) as f64 * m_frac) as u64 % (n - 1);
            let c = 1 + ((m.min(n - m) as f64) * c_frac) as u64 % m.min(n - m);
            for kind in [DistKind::NegHypergeometric, DistKind::MinNegHypergeometric, DistKind::MaxNegHypergeometric] {
                let t = pmf_table(kind, urn(n, m, c)).unwrap();
                prop_assert!((t.total() - 1.0).abs() < 1e-9, "{} {} {} {}", kind, n, m, c);
            }
        }

        #[test]
        fn bernoulli_tables_sum_to_one(c in 1u64..30, p in 0.02f64..0.98) {
            let b = BernoulliParams::new(c, p).unwrap();
            for kind in [DistKind::NegBinomial, DistKind::MinNegBinomial, DistKind::MaxNegBinomial] {
                let t = pmf_table(kind, b).unwrap();
                prop_assert!((t.total() - 1.0).abs() < 1e-9, "{} {} {}", kind, c, p);
            }
        }
    }
}
