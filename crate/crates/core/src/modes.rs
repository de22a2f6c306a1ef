//! Local modes of the maximum negative hypergeometric pmf.
//!
//! `Pr[Y=0] / Pr[Y=1] = (c+1)/c`, so there is always a mode at zero; a
//! second one appears further out when `m/N` is far enough from 1/2.

use std::ops::RangeInclusive;

use crate::distributions::{maxnh_ln_pmf, maxnh_max_y, pmf_table, DistKind, PmfTable, UrnParams};
use crate::error::{Error, Result};

/// Relative difference below which adjacent probabilities count as equal.
pub const PLATEAU_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub modes: Vec<u64>,
    pub is_unimodal: bool,
    /// `Pr[Y=0] / Pr[Y=1]`, absent when the support is `{0}`.
    pub p0_over_p1: Option<f64>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PLATEAU_TOLERANCE * a.abs().max(b.abs())
}

/// Positions of the local maxima of a finite table.
///
/// A run of equal probabilities counts once, at its left end, and is a mode
/// when it rises from the left (or starts at zero) and falls to the right
/// (or ends the support).
pub fn local_modes(table: &PmfTable) -> ModeReport {
    let p = table.probs();
    let mut modes = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let mut end = start;
        while end + 1 < p.len() && close(p[end + 1], p[start]) {
            end += 1;
        }
        let rises = start == 0 || p[start] > p[start - 1];
        let falls = end + 1 == p.len() || p[end] > p[end + 1];
        if rises && falls {
            modes.push(start as u64);
        }
        start = end + 1;
    }
    let p0_over_p1 = (p.len() > 1).then(|| p[0] / p[1]);
    ModeReport { is_unimodal: modes.len() == 1, modes, p0_over_p1 }
}

/// `Pr[Y=0] / Pr[Y=1]`, which equals `(c+1)/c` for every valid urn.
pub fn p0_p1_ratio(params: UrnParams) -> Result<f64> {
    if maxnh_max_y(params) == 0 {
        return Err(Error::Domain(format!("support of {params:?} is {{0}}")));
    }
    Ok((maxnh_ln_pmf(params, 0) - maxnh_ln_pmf(params, 1)).exp())
}

pub fn mode_report(params: UrnParams) -> ModeReport {
    let table = pmf_table(DistKind::MaxNegHypergeometric, params).expect("urn parameters fit the urn pmf");
    local_modes(&table)
}

/// Maximal runs of `m` in `[c, N-c]` whose pmf is unimodal. The degenerate
/// urn `c = m = N/2` is left out.
pub fn unimodal_m_range(n: u64, c: u64) -> Result<Vec<RangeInclusive<u64>>> {
    if c == 0 || 2 * c > n {
        return Err(Error::InvalidArgument(format!("no valid m for N={n}, c={c}")));
    }
    let mut runs: Vec<RangeInclusive<u64>> = Vec::new();
    for m in c..=n - c {
        let params = UrnParams::new(n, m, c)?;
        if params.is_degenerate() || !mode_report(params).is_unimodal {
            continue;
        }
        match runs.last_mut() {
            Some(run) if *run.end() + 1 == m => *run = *run.start()..=m,
            _ => runs.push(m..=m),
        }
    }
    Ok(runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Origin, Params};

    fn urn(n: u64, m: u64, c: u64) -> UrnParams {
        UrnParams::new(n, m, c).unwrap()
    }

    #[test]
    fn mode_examples() {
        let r = mode_report(urn(10, 5, 2));
        assert_eq!(r.modes, vec![0]);
        assert!(r.is_unimodal);

        let r = mode_report(urn(24, 8, 6));
        assert_eq!(r.modes.len(), 2);
        assert_eq!(r.modes[0], 0);

        let r = mode_report(urn(8, 4, 4));
        assert_eq!(r.modes, vec![0]);
        assert_eq!(r.p0_over_p1, None);
    }

    #[test]
    fn flat_tail_counts_as_one_plateau() {
        // c = m = 1: 2/N at zero then a flat 1/N tail
        let r = mode_report(urn(9, 1, 1));
        assert_eq!(r.modes, vec![0]);
        let p: Params = urn(9, 1, 1).into();
        let t = PmfTable::new(DistKind::MaxNegHypergeometric, p, Origin::Exact, None, vec![0.1, 0.3, 0.3, 0.2, 0.2]);
        assert_eq!(local_modes(&t).modes, vec![1]);
        let t = PmfTable::new(DistKind::MaxNegHypergeometric, p, Origin::Exact, None, vec![0.3, 0.1, 0.3, 0.3]);
        assert_eq!(local_modes(&t).modes, vec![0, 2]);
    }

    #[test]
    fn ratio_examples() {
        assert!((p0_p1_ratio(urn(15, 6, 3)).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((p0_p1_ratio(urn(50, 25, 20)).unwrap() - 21.0 / 20.0).abs() < 1e-12);
        for n in 3..30 {
            for m in 1..n {
                assert!((p0_p1_ratio(urn(n, m, 1)).unwrap() - 2.0).abs() < 1e-10);
            }
        }
        assert!(matches!(p0_p1_ratio(urn(6, 3, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn half_full_urn_is_unimodal() {
        for n in (2..=60u64).step_by(2) {
            for c in 1..=n / 2 {
                let p = urn(n, n / 2, c);
                assert!(mode_report(p).is_unimodal, "{p:?}");
            }
        }
    }

    #[test]
    fn small_table_rows() {
        assert_eq!(unimodal_m_range(10, 1).unwrap(), vec![1..=9]);
        assert_eq!(unimodal_m_range(10, 2).unwrap(), vec![3..=7]);
        assert_eq!(unimodal_m_range(10, 3).unwrap(), vec![4..=6]);
        assert_eq!(unimodal_m_range(10, 4).unwrap(), vec![5..=5]);
        assert!(unimodal_m_range(10, 5).unwrap().is_empty());
        assert_eq!(unimodal_m_range(50, 10).unwrap(), vec![20..=30]);
        assert!(unimodal_m_range(10, 6).is_err());
    }

    #[test]
    fn unimodal_ranges_are_symmetric() {
        for n in [11u64, 20, 33, 40] {
            for c in 1..=n / 2 {
                for run in unimodal_m_range(n, c).unwrap() {
                    let mirrored = (n - run.end())..=(n - run.start());
                    assert!(unimodal_m_range(n, c).unwrap().contains(&mirrored));
                }
            }
        }
    }
}
