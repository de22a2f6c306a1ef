//! Limiting distributions of the maximum negative hypergeometric and the
//! machinery to measure how close the exact pmf gets to each.
//!
//! | kind                 | regime                              | limit of                  |
//! |----------------------|-------------------------------------|---------------------------|
//! | `MaxNbLimit`         | fixed `c`, `m/N -> p`               | `Y` ~ MxNB(c, p)          |
//! | `GammaLimit`         | fixed `c`, `m ~ theta sqrt(N)`      | `theta Y / sqrt(N)` ~ Erlang(c) |
//! | `HalfNormalLimit`    | `m = N/2`, `c ~ sqrt(N)`            | `Y / sqrt(2c)` ~ half-normal |
//! | `NormalLimit`        | `m = pN`, `p > 1/2`, `c ~ sqrt(N)`  | `(Y - mu)/sigma` ~ N(0, 1) |
//!
//! Continuous densities are evaluated at integer `y` (with the Jacobian of
//! the scaling) and renormalised over the exact support before any distance
//! is taken.

use std::f64::consts::PI;

use crate::distributions::{maxnb_pmf, maxnh_max_y, pmf_table, BernoulliParams, DistKind, Origin, PmfTable, UrnParams};
use crate::error::{Error, Result};
use crate::kernel::log_factorial;
use crate::simulate::tv_distance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxKind {
    MaxNbLimit,
    GammaLimit,
    HalfNormalLimit,
    NormalLimit,
}

impl ApproxKind {
    pub fn label(self) -> &'static str {
        match self {
            ApproxKind::MaxNbLimit => "maxnb_limit",
            ApproxKind::GammaLimit => "gamma_limit",
            ApproxKind::HalfNormalLimit => "halfnormal_limit",
            ApproxKind::NormalLimit => "normal_limit",
        }
    }
}

/// Parameters of a limiting distribution, derived from an urn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApproxSpec {
    MaxNb(BernoulliParams),
    /// Erlang(`shape`) in `x = theta y / sqrt(N)`.
    Gamma {
        theta: f64,
        shape: u64,
        sqrt_n: f64,
    },
    /// Half-normal in `x = y / scale`, `scale = sqrt(2c)`.
    HalfNormal {
        scale: f64,
    },
    Normal {
        mu: f64,
        sigma: f64,
    },
}

impl ApproxSpec {
    pub fn new(kind: ApproxKind, params: UrnParams) -> Result<Self> {
        Ok(match kind {
            ApproxKind::MaxNbLimit => ApproxSpec::MaxNb(maxnb_limit(params)),
            ApproxKind::GammaLimit => {
                let sqrt_n = (params.n() as f64).sqrt();
                ApproxSpec::Gamma { theta: params.m() as f64 / sqrt_n, shape: params.c(), sqrt_n }
            }
            ApproxKind::HalfNormalLimit => ApproxSpec::HalfNormal { scale: (2.0 * params.c() as f64).sqrt() },
            ApproxKind::NormalLimit => {
                let (mu, sigma) = normal_approx_params(params)?;
                ApproxSpec::Normal { mu, sigma }
            }
        })
    }

    pub fn kind(&self) -> ApproxKind {
        match self {
            ApproxSpec::MaxNb(_) => ApproxKind::MaxNbLimit,
            ApproxSpec::Gamma { .. } => ApproxKind::GammaLimit,
            ApproxSpec::HalfNormal { .. } => ApproxKind::HalfNormalLimit,
            ApproxSpec::Normal { .. } => ApproxKind::NormalLimit,
        }
    }

    /// Approximate `Pr[Y = y]`.
    pub fn density(&self, y: u64) -> f64 {
        let yf = y as f64;
        match *self {
            ApproxSpec::MaxNb(b) => maxnb_pmf(b, y),
            ApproxSpec::Gamma { theta, shape, sqrt_n } => {
                let jacobian = theta / sqrt_n;
                jacobian * erlang_density(shape, jacobian * yf)
            }
            ApproxSpec::HalfNormal { scale } => half_normal_density(yf / scale) / scale,
            ApproxSpec::Normal { mu, sigma } => std_normal_density((yf - mu) / sigma) / sigma,
        }
    }
}

fn erlang_density(shape: u64, x: f64) -> f64 {
    if x == 0.0 {
        return if shape == 1 { 1.0 } else { 0.0 };
    }
    ((shape - 1) as f64 * x.ln() - x - log_factorial(shape - 1)).exp()
}

fn half_normal_density(x: f64) -> f64 {
    (2.0 / PI).sqrt() * (-0.5 * x * x).exp()
}

fn std_normal_density(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Bernoulli limit of sampling without replacement: `(c, p = m/N)`.
pub fn maxnb_limit(params: UrnParams) -> BernoulliParams {
    BernoulliParams::new(params.c(), params.m() as f64 / params.n() as f64).expect("1 <= m < N keeps m/N inside (0, 1)")
}

/// Erlang(`c`) density at `x = m y / N`, scaled by the Jacobian `m / N`.
///
/// `theta = m / sqrt(N)` is read off the parameters whether or not the urn
/// is in the `m ~ theta sqrt(N)` regime.
pub fn gamma_approx_density(params: UrnParams, y: u64) -> f64 {
    ApproxSpec::new(ApproxKind::GammaLimit, params).map(|s| s.density(y)).unwrap_or(0.0)
}

/// Half-normal density at `x = y / sqrt(2c)`, scaled by `1 / sqrt(2c)`.
pub fn halfnormal_approx_density(c: u64, y: u64) -> f64 {
    ApproxSpec::HalfNormal { scale: (2.0 * c as f64).sqrt() }.density(y)
}

/// Mean and scale of the normal limit, `mu = c(p-q)/q` and
/// `sigma = sqrt(cp)/q` with `p = max(m, N-m)/N`.
pub fn normal_approx_params(params: UrnParams) -> Result<(f64, f64)> {
    let (n, m) = (params.n(), params.m());
    if 2 * m == n {
        return Err(Error::Domain("normal limit needs m != N/2; use the half-normal limit".into()));
    }
    let p = m.max(n - m) as f64 / n as f64;
    let q = 1.0 - p;
    let c = params.c() as f64;
    Ok((c * (p - q) / q, (c * p).sqrt() / q))
}

/// The reference pmf an exact table is compared with.
///
/// The Bernoulli limit is already a pmf and is tabulated over its own
/// support; the continuous limits are sampled at each integer of the exact
/// support and renormalised there.
pub fn approximating_table(kind: ApproxKind, params: UrnParams) -> Result<PmfTable> {
    let spec = ApproxSpec::new(kind, params)?;
    if let ApproxSpec::MaxNb(b) = spec {
        return pmf_table(DistKind::MaxNegBinomial, b);
    }
    let raw: Vec<f64> = (0..=maxnh_max_y(params)).map(|y| spec.density(y)).collect();
    let total: f64 = raw.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::Domain(format!("{} has no mass on the support of {params:?}", kind.label())));
    }
    let probs = raw.into_iter().map(|d| d / total).collect();
    Ok(PmfTable::new(DistKind::MaxNegHypergeometric, params.into(), Origin::Approximation(kind), None, probs))
}

/// Unnormalised mass the approximation puts on the exact support.
pub fn mass_on_support(kind: ApproxKind, params: UrnParams) -> Result<f64> {
    let spec = ApproxSpec::new(kind, params)?;
    Ok((0..=maxnh_max_y(params)).map(|y| spec.density(y)).sum())
}

/// Total variation between the exact pmf and its approximation for each
/// size, with urns produced by `regime`.
pub fn convergence_sweep<F>(kind: ApproxKind, regime: F, sizes: &[u64]) -> Result<Vec<(u64, f64)>>
where
    F: Fn(u64) -> Result<UrnParams>,
{
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sweep sizes must be strictly increasing".into()));
    }
    sizes
        .iter()
        .map(|&size| {
            let params = regime(size)?;
            let exact = pmf_table(DistKind::MaxNegHypergeometric, params)?;
            let approx = approximating_table(kind, params)?;
            Ok((size, tv_distance(&exact, &approx)))
        })
        .collect()
}
