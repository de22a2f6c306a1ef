//! Regenerates the data behind the six standard plots from first principles.
//!
//! Figures 1 to 5 overlay exact pmfs for a growing urn on the limiting
//! maximum negative binomial; figure 6 plots the likelihood kernel for every
//! observed `y` from 0 to 7.

use crate::distributions::{pmf, support, BernoulliParams, DistKind, Params, UrnParams};
use crate::error::{Error, Result};
use crate::estimation::{loglik_kernel, GridSpec};

/// What a trace plots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceSource {
    Pmf { kind: DistKind, params: Params },
    Likelihood { n: u64, c: u64, y: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub source: TraceSource,
    /// `(x, value)`: `(y, Pr[Y=y])` for pmfs, `(m, Λ(m))` for likelihoods.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub which: u8,
    pub caption: &'static str,
    pub traces: Vec<Trace>,
}

pub const FIGURES: std::ops::RangeInclusive<u8> = 1..=6;

struct PmfFigure {
    caption: &'static str,
    sizes: &'static [u64],
    /// `m` as a fraction `num / den` of `N`
    share: (u64, u64),
    c: u64,
    p: f64,
    x_max: u64,
    limit_first: bool,
}

fn pmf_figure(which: u8) -> Option<PmfFigure> {
    let f = match which {
        1 => PmfFigure {
            caption: "c=3, m=0.4N",
            sizes: &[15, 20, 30, 60, 120],
            share: (2, 5),
            c: 3,
            p: 0.4,
            x_max: 12,
            limit_first: false,
        },
        2 => PmfFigure {
            caption: "c=6, m=N/3",
            sizes: &[24, 27, 30, 36, 48, 96],
            share: (1, 3),
            c: 6,
            p: 1.0 / 3.0,
            x_max: 12,
            limit_first: false,
        },
        3 => PmfFigure {
            caption: "c=20, m=N/4",
            sizes: &[100, 120, 200, 400],
            share: (1, 4),
            c: 20,
            p: 0.25,
            x_max: 80,
            limit_first: true,
        },
        4 => PmfFigure {
            caption: "c=2, m=N/10",
            sizes: &[40, 50, 100],
            share: (1, 10),
            c: 2,
            p: 0.1,
            x_max: 80,
            limit_first: false,
        },
        5 => PmfFigure {
            caption: "c=20, m=N/2",
            sizes: &[50, 54, 60, 70, 100, 300],
            share: (1, 2),
            c: 20,
            p: 0.5,
            x_max: 20,
            limit_first: false,
        },
        _ => return None,
    };
    Some(f)
}

/// Likelihood grid of figure 6.
pub const FIGURE6_GRID: (f64, f64, f64) = (3.0, 17.0, 0.25);
pub const FIGURE6_N: u64 = 20;
pub const FIGURE6_C: u64 = 3;
pub const FIGURE6_MAX_Y: u64 = 7;

/// The traces of one figure, in plotting order, without their data.
pub fn trace_sources(which: u8) -> Result<Vec<TraceSource>> {
    if which == 6 {
        let (n, c) = (FIGURE6_N, FIGURE6_C);
        return Ok((0..=FIGURE6_MAX_Y).map(|y| TraceSource::Likelihood { n, c, y }).collect());
    }
    let f = pmf_figure(which).ok_or_else(|| Error::InvalidArgument(format!("no figure {which}; choose 1 to 6")))?;
    let mut sources = f
        .sizes
        .iter()
        .map(|&n| {
            let m = n * f.share.0 / f.share.1;
            Ok(TraceSource::Pmf { kind: DistKind::MaxNegHypergeometric, params: UrnParams::new(n, m, f.c)?.into() })
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = TraceSource::Pmf { kind: DistKind::MaxNegBinomial, params: BernoulliParams::new(f.c, f.p)?.into() };
    if f.limit_first {
        sources.insert(0, limit);
    } else {
        sources.push(limit);
    }
    Ok(sources)
}

pub fn figure(which: u8) -> Result<Figure> {
    let sources = trace_sources(which)?;
    let (caption, x_max) = match pmf_figure(which) {
        Some(f) => (f.caption, f.x_max),
        None => ("N=20, c=3, y=0..7", 0),
    };
    let traces = sources
        .into_iter()
        .map(|source| {
            let points = match source {
                TraceSource::Pmf { kind, params } => {
                    let last = (*support(kind, &params)?.end()).min(x_max);
                    (0..=last).map(|y| Ok((y as f64, pmf(kind, &params, y)?))).collect::<Result<Vec<_>>>()?
                }
                TraceSource::Likelihood { n, c, y } => {
                    let (lo, hi, step) = FIGURE6_GRID;
                    let grid = GridSpec::new(lo, hi, step)?;
                    grid.points()
                        .into_iter()
                        .map(|m| Ok((m, loglik_kernel(m, n, c, y)?)))
                        .collect::<Result<Vec<_>>>()?
                }
            };
            Ok(Trace { source, points })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Figure { which, caption, traces })
}
