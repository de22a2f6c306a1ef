//! The maximum negative hypergeometric distribution and its relatives.
//!
//! Draw without replacement from an urn of `N` balls, `m` of one colour and
//! `N - m` of the other, until `c` of each colour have appeared. `Y` is the
//! number of excess draws past `2c`. The crate provides its pmf alongside the
//! negative, minimum negative and maximum negative binomial and
//! hypergeometric cousins, an urn simulator, mode analysis, the large-urn
//! limits and maximum likelihood estimation of `m`.

pub mod approximations;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod figures;
pub mod golden;
pub mod kernel;
pub mod modes;
pub mod oracle;
pub mod selfcheck;
pub mod simulate;

pub use approximations::{ApproxKind, ApproxSpec};
pub use distributions::{pmf, pmf_table, BernoulliParams, DistKind, Origin, Params, PmfTable, UrnParams};
pub use error::{Error, Result};
pub use estimation::{critical_point, mle, profile, Classification, CriticalPointReport, GridSpec, LikelihoodProfile};
pub use figures::{figure, Figure, Trace, TraceSource};
pub use golden::GoldenData;
pub use kernel::SignedLogValue;
pub use modes::{mode_report, unimodal_m_range, ModeReport};
pub use selfcheck::{SelfCheckReport, SuiteResult};
pub use simulate::{DrawOutcome, GoodnessOfFit, Histogram, SimConfig};
