//! Compares the library against the embedded reference values and the exact
//! oracles, one suite at a time.

use crate::distributions::{maxnh_max_y, pmf, support, DistKind, Params};
use crate::estimation::loglik_kernel;
use crate::golden::GoldenData;
use crate::modes::{p0_p1_ratio, unimodal_m_range};
use crate::oracle::{self, enumerate, exact_pmf, to_f64, urn_triples};

pub const FIGURE_TOLERANCE: f64 = 1e-4;
pub const LIKELIHOOD_TOLERANCE: f64 = 1e-5;
pub const ENUMERATION_MAX_N: u64 = 12;
/// Floating-point pmfs against the exact rationals on the enumerated urns.
pub const FLOAT_TOLERANCE: f64 = 1e-12;
pub const RATIO_MAX_N: u64 = 60;
pub const RATIO_TOLERANCE: f64 = 1e-10;

const URN_KINDS: [DistKind; 3] =
    [DistKind::NegHypergeometric, DistKind::MinNegHypergeometric, DistKind::MaxNegHypergeometric];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    /// Largest deviation seen; for the table and the exact oracle, the
    /// number of mismatching entries.
    pub max_deviation: f64,
    pub tolerance: f64,
    /// First failing case, if any.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none() && self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfCheckReport {
    pub suites: Vec<SuiteResult>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

struct Tally {
    result: SuiteResult,
}

impl Tally {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            result: SuiteResult { name: name.into(), checked: 0, max_deviation: 0.0, tolerance, first_failure: None },
        }
    }

    fn record(&mut self, deviation: f64, case: impl FnOnce() -> String) {
        let r = &mut self.result;
        r.checked += 1;
        // NaN must fail too
        let bad = deviation.is_nan() || deviation > r.tolerance;
        if bad && r.first_failure.is_none() {
            r.first_failure = Some(case());
        }
        if deviation.is_nan() {
            r.max_deviation = f64::NAN;
        } else if !r.max_deviation.is_nan() {
            r.max_deviation = r.max_deviation.max(deviation);
        }
    }

    fn fail(&mut self, case: String) {
        self.result.checked += 1;
        self.result.max_deviation += 1.0;
        self.result.first_failure.get_or_insert(case);
    }

    fn finish(self) -> SuiteResult {
        self.result
    }
}

fn describe(kind: DistKind, params: &Params) -> String {
    match params {
        Params::Urn(u) => format!("{kind}(N={}, m={}, c={})", u.n(), u.m(), u.c()),
        Params::Bernoulli(b) => format!("{kind}(c={}, p={})", b.c(), b.p()),
    }
}

/// One suite per plotted figure.
pub fn figure_suites(golden: &GoldenData) -> Vec<SuiteResult> {
    let mut suites: Vec<SuiteResult> = golden
        .figures()
        .into_iter()
        .map(|fig| {
            let mut t = Tally::new(format!("fig{fig}"), FIGURE_TOLERANCE);
            for p in golden.pmf.iter().filter(|p| p.figure == fig) {
                match pmf(p.kind, &p.params, p.y) {
                    Ok(v) => t.record((v - p.prob).abs(), || {
                        format!("{} y={}: {v} vs {}", describe(p.kind, &p.params), p.y, p.prob)
                    }),
                    Err(e) => t.fail(format!("{}: {e}", describe(p.kind, &p.params))),
                }
            }
            t.finish()
        })
        .collect();

    let mut t = Tally::new("fig6", LIKELIHOOD_TOLERANCE);
    for p in &golden.lambda {
        match loglik_kernel(p.m, p.n, p.c, p.y) {
            Ok(v) => t.record((v - p.lambda).abs(), || {
                format!("N={} c={} y={} m={}: {v} vs {}", p.n, p.c, p.y, p.m, p.lambda)
            }),
            Err(e) => t.fail(format!("N={} c={} y={} m={}: {e}", p.n, p.c, p.y, p.m)),
        }
    }
    suites.push(t.finish());
    suites
}

pub fn unimodal_suite(golden: &GoldenData) -> SuiteResult {
    let mut t = Tally::new("unimodal_ranges", 0.0);
    for row in &golden.unimodal {
        let expected: Vec<_> = row.range.iter().cloned().collect();
        match unimodal_m_range(row.n, row.c) {
            Ok(got) if got == expected => t.record(0.0, String::new),
            Ok(got) => t.fail(format!("N={} c={}: {got:?} vs {expected:?}", row.n, row.c)),
            Err(e) => t.fail(format!("N={} c={}: {e}", row.n, row.c)),
        }
    }
    t.finish()
}

/// Closed forms in exact arithmetic against exhaustive enumeration, then the
/// floating-point pmfs against the same counts.
pub fn enumeration_suites(max_n: u64) -> Vec<SuiteResult> {
    let mut exact = Tally::new(format!("enumeration_exact_n{max_n}"), 0.0);
    let mut float = Tally::new(format!("enumeration_f64_n{max_n}"), FLOAT_TOLERANCE);
    for params in urn_triples(max_n) {
        for kind in URN_KINDS {
            let counts = enumerate(kind, params);
            let last = *support(kind, &params.into()).expect("urn kind").end();
            let ys = last.max(counts.counts.len() as u64);
            for y in 0..=ys {
                let truth = counts.prob(y);
                if exact_pmf(kind, params, y) != truth {
                    exact.fail(format!("{kind} {params:?} y={y}"));
                } else {
                    exact.record(0.0, String::new);
                }
                let v = pmf(kind, &params.into(), y).unwrap_or(f64::NAN);
                float.record((v - to_f64(&truth)).abs(), || format!("{kind} {params:?} y={y}: {v}"));
            }
        }
    }
    vec![exact.finish(), float.finish()]
}

/// `Pr[Y=0] / Pr[Y=1] = (c+1)/c`, relative error.
pub fn mode_ratio_suite(max_n: u64) -> SuiteResult {
    let mut t = Tally::new(format!("mode_ratio_n{max_n}"), RATIO_TOLERANCE);
    for params in urn_triples(max_n) {
        if maxnh_max_y(params) == 0 {
            continue;
        }
        let c = params.c() as f64;
        let want = (c + 1.0) / c;
        match p0_p1_ratio(params) {
            Ok(r) => t.record((r / want - 1.0).abs(), || format!("{params:?}: {r}")),
            Err(e) => t.fail(format!("{params:?}: {e}")),
        }
    }
    t.finish()
}

pub fn run(golden: &GoldenData) -> SelfCheckReport {
    let mut suites = figure_suites(golden);
    suites.push(unimodal_suite(golden));
    suites.extend(enumeration_suites(ENUMERATION_MAX_N));
    suites.push(mode_ratio_suite(RATIO_MAX_N));
    SelfCheckReport { suites }
}

pub fn run_embedded() -> SelfCheckReport {
    run(&GoldenData::embedded())
}

// keeps the oracle bound explicit at the call site
const _: () = assert!(ENUMERATION_MAX_N <= oracle::MAX_ENUMERATION_N);
