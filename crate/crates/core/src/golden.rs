//! Reference values transcribed from published plot coordinates, shipped as
//! CSV fixtures under `data/`.
//!
//! Plot values are printed with 4 to 10 decimals and occasionally truncated
//! rather than rounded, so they are compared with an absolute tolerance.

use std::ops::RangeInclusive;

use crate::distributions::{BernoulliParams, DistKind, Params, UrnParams};
use crate::error::{Error, Result};

pub const FIGURE_PMF_CSV: &str = include_str!("../data/figure_pmf.csv");
pub const FIGURE6_LAMBDA_CSV: &str = include_str!("../data/figure6_lambda.csv");
pub const UNIMODAL_CSV: &str = include_str!("../data/unimodal_ranges.csv");

/// One plotted probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmfPoint {
    pub figure: u8,
    pub kind: DistKind,
    pub params: Params,
    pub y: u64,
    pub prob: f64,
}

/// One plotted value of the likelihood kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPoint {
    pub n: u64,
    pub c: u64,
    pub y: u64,
    pub m: f64,
    pub lambda: f64,
}

/// Unimodal range of `m` for one `(N, c)`; `None` where the only valid urn is
/// degenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodalRow {
    pub n: u64,
    pub c: u64,
    pub range: Option<RangeInclusive<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenData {
    pub pmf: Vec<PmfPoint>,
    pub lambda: Vec<LambdaPoint>,
    pub unimodal: Vec<UnimodalRow>,
}

impl GoldenData {
    pub fn embedded() -> Self {
        Self::parse(FIGURE_PMF_CSV, FIGURE6_LAMBDA_CSV, UNIMODAL_CSV).expect("embedded fixtures parse")
    }

    pub fn parse(pmf_csv: &str, lambda_csv: &str, ranges_csv: &str) -> Result<Self> {
        Ok(Self {
            pmf: rows(pmf_csv, 8).map(|r| r.and_then(|f| pmf_point(&f))).collect::<Result<_>>()?,
            lambda: rows(lambda_csv, 5).map(|r| r.and_then(|f| lambda_point(&f))).collect::<Result<_>>()?,
            unimodal: rows(ranges_csv, 4).map(|r| r.and_then(|f| unimodal_row(&f))).collect::<Result<_>>()?,
        })
    }

    pub fn figures(&self) -> Vec<u8> {
        let mut figs: Vec<u8> = self.pmf.iter().map(|p| p.figure).collect();
        figs.dedup();
        figs
    }
}

/// Data lines after the header, split on commas.
fn rows(text: &str, width: usize) -> impl Iterator<Item = Result<Vec<&str>>> {
    text.lines().skip(1).filter(|l| !l.trim().is_empty()).map(move |line| {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() == width {
            Ok(fields)
        } else {
            Err(Error::InvalidArgument(format!("expected {width} fields in fixture line {line:?}")))
        }
    })
}

fn num<T: std::str::FromStr>(field: &str) -> Result<T> {
    field.parse().map_err(|_| Error::InvalidArgument(format!("bad number {field:?} in fixture")))
}

fn pmf_point(f: &[&str]) -> Result<PmfPoint> {
    let kind: DistKind = f[1].parse()?;
    let params: Params = if kind.is_urn() {
        UrnParams::new(num(f[2])?, num(f[3])?, num(f[4])?)?.into()
    } else {
        BernoulliParams::new(num(f[4])?, num(f[5])?)?.into()
    };
    Ok(PmfPoint { figure: num(f[0])?, kind, params, y: num(f[6])?, prob: num(f[7])? })
}

fn lambda_point(f: &[&str]) -> Result<LambdaPoint> {
    Ok(LambdaPoint { n: num(f[0])?, c: num(f[1])?, y: num(f[2])?, m: num(f[3])?, lambda: num(f[4])? })
}

fn unimodal_row(f: &[&str]) -> Result<UnimodalRow> {
    let range = match (f[2], f[3]) {
        ("", "") => None,
        (lo, hi) => Some(num(lo)?..=num(hi)?),
    };
    Ok(UnimodalRow { n: num(f[0])?, c: num(f[1])?, range })
}
