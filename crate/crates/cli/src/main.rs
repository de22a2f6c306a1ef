//! `mxnh`: tables, simulations and checks for the maximum negative
//! hypergeometric family, written as CSV to standard output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use mxnh::distributions::cdf;
use mxnh::estimation::{critical_point, loglik_kernel};
use mxnh::figures::TraceSource;
use mxnh::simulate::{histogram, histogram_table, sample};
use mxnh::{
    figure, mle, mode_report, pmf_table, selfcheck, unimodal_m_range, BernoulliParams, DistKind, GoldenData, GridSpec,
    Params, SimConfig, UrnParams,
};

use mxnh_cli::format::real;

#[derive(Parser)]
#[command(name = "mxnh", version, about = "Maximum negative hypergeometric tables, simulations and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Probability mass function over the support (tail-truncated for
    /// the binomial schemes)
    Pmf {
        /// nb, maxnb, minnb, nh, minnh or maxnh
        dist: DistKind,
        #[command(flatten)]
        params: ParamArgs,
        /// Add a cumulative column
        #[arg(long)]
        cdf: bool,
    },
    /// Simulate the stopping rule
    Sample {
        scheme: DistKind,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the normalised histogram instead of raw draws
        #[arg(long)]
        empirical_pmf: bool,
    },
    /// Unimodal ranges of m, or the modes of one urn with --m
    Modes {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Maximum likelihood estimate of m from one observed y
    Mle {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        y: u64,
        /// Print the likelihood kernel on lo:hi:step instead
        #[arg(long)]
        profile: Option<GridSpec>,
    },
    /// Data for one of the six standard plots
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        which: u8,
    },
    /// Compare against the embedded reference values and exact oracles
    Selfcheck {
        /// Read figure_pmf.csv, figure6_lambda.csv and unimodal_ranges.csv
        /// from this directory instead of the embedded copies
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    c: u64,
    #[arg(long)]
    p: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self, kind: DistKind) -> anyhow::Result<Params> {
        if kind.is_urn() {
            let (Some(n), Some(m)) = (self.n, self.m) else {
                bail!("{kind} needs --N and --m");
            };
            Ok(UrnParams::new(n, m, self.c)?.into())
        } else {
            let Some(p) = self.p else {
                bail!("{kind} needs --p");
            };
            Ok(BernoulliParams::new(self.c, p)?.into())
        }
    }
}

type Csv = csv::Writer<io::StdoutLock<'static>>;

fn csv_out() -> Csv {
    csv::Writer::from_writer(io::stdout().lock())
}

fn cmd_pmf(dist: DistKind, params: &ParamArgs, with_cdf: bool, out: &mut Csv) -> anyhow::Result<()> {
    let table = pmf_table(dist, params.resolve(dist)?)?;
    if with_cdf {
        out.write_record(["y", "pmf", "cdf"])?;
    } else {
        out.write_record(["y", "pmf"])?;
    }
    for (y, p) in table.iter() {
        let mut row = vec![y.to_string(), real(p)];
        if with_cdf {
            row.push(real(cdf(&table, y as i64)));
        }
        out.write_record(&row)?;
    }
    Ok(())
}

fn cmd_sample(
    scheme: DistKind,
    params: &ParamArgs,
    trials: u64,
    seed: u64,
    empirical: bool,
    out: &mut Csv,
) -> anyhow::Result<()> {
    let params = params.resolve(scheme)?;
    let config = SimConfig::new(seed, trials)?;
    if empirical {
        let h = histogram(scheme, &params, config)?;
        let table = histogram_table(scheme, params, &h);
        out.write_record(["y", "count", "pmf"])?;
        for (y, p) in table.iter() {
            out.write_record([y.to_string(), h.count(y).to_string(), real(p)])?;
        }
    } else {
        out.write_record(["y", "terminal_color", "count1", "count2"])?;
        for o in sample(scheme, &params, config)? {
            out.write_record([
                o.y.to_string(),
                o.terminal.label().into(),
                o.counts.0.to_string(),
                o.counts.1.to_string(),
            ])?;
        }
    }
    Ok(())
}

fn cmd_modes(n: u64, c: u64, m: Option<u64>, out: &mut Csv) -> anyhow::Result<()> {
    if let Some(m) = m {
        let report = mode_report(UrnParams::new(n, m, c)?);
        let modes: Vec<String> = report.modes.iter().map(u64::to_string).collect();
        out.write_record(["N", "m", "c", "modes", "unimodal", "p0_over_p1"])?;
        out.write_record([
            n.to_string(),
            m.to_string(),
            c.to_string(),
            modes.join(" "),
            report.is_unimodal.to_string(),
            report.p0_over_p1.map(real).unwrap_or_default(),
        ])?;
        return Ok(());
    }
    let runs = unimodal_m_range(n, c)?;
    out.write_record(["N", "c", "m_range"])?;
    if runs.is_empty() {
        // every valid m is the point mass c = m = N/2, or none are unimodal
        let only_degenerate = (c..=n - c).all(|m| UrnParams::new(n, m, c).is_ok_and(|p| p.is_degenerate()));
        let note = if only_degenerate { "degenerate" } else { "none" };
        out.write_record([n.to_string(), c.to_string(), note.into()])?;
    }
    for run in runs {
        out.write_record([n.to_string(), c.to_string(), format!("{}..{}", run.start(), run.end())])?;
    }
    Ok(())
}

fn cmd_mle(n: u64, c: u64, y: u64, grid: Option<GridSpec>, out: &mut Csv) -> anyhow::Result<()> {
    if let Some(grid) = grid {
        out.write_record(["m", "lambda"])?;
        for m in grid.points() {
            let v = loglik_kernel(m, n, c, y).with_context(|| format!("profile point m={m}"))?;
            out.write_record([real(m), real(v)])?;
        }
        return Ok(());
    }
    let estimates = mle(n, c, y)?;
    let (phi, class) = match critical_point(n, c, y) {
        Ok(r) => (real(r.phi_value), r.classification.label()),
        // centre is a pole of the curvature sums; the search decided alone
        Err(mxnh::Error::Domain(_)) => (String::new(), "undefined"),
        Err(e) => return Err(e.into()),
    };
    out.write_record(["N", "c", "y", "phi", "classification", "m_hat"])?;
    for m in estimates {
        out.write_record([n.to_string(), c.to_string(), y.to_string(), phi.clone(), class.into(), real(m)])?;
    }
    Ok(())
}

fn cmd_figure(which: u8, out: &mut Csv) -> anyhow::Result<()> {
    let fig = figure(which)?;
    out.write_record(["trace", "source", "N", "m", "c", "p", "y", "x", "value"])?;
    let blank = String::new;
    for (i, trace) in fig.traces.iter().enumerate() {
        let head: [String; 6] = match trace.source {
            TraceSource::Pmf { kind, params: Params::Urn(u) } => {
                [kind.label().into(), u.n().to_string(), u.m().to_string(), u.c().to_string(), blank(), blank()]
            }
            TraceSource::Pmf { kind, params: Params::Bernoulli(b) } => {
                [kind.label().into(), blank(), blank(), b.c().to_string(), real(b.p()), blank()]
            }
            TraceSource::Likelihood { n, c, y } => {
                ["loglik".into(), n.to_string(), blank(), c.to_string(), blank(), y.to_string()]
            }
        };
        for &(x, v) in &trace.points {
            let mut row = vec![(i + 1).to_string()];
            row.extend(head.iter().cloned());
            row.push(real(x));
            row.push(real(v));
            out.write_record(&row)?;
        }
    }
    Ok(())
}

fn load_fixtures(dir: &Path) -> anyhow::Result<GoldenData> {
    let read = |name: &str| {
        fs::read_to_string(dir.join(name)).with_context(|| format!("reading {}", dir.join(name).display()))
    };
    Ok(GoldenData::parse(&read("figure_pmf.csv")?, &read("figure6_lambda.csv")?, &read("unimodal_ranges.csv")?)?)
}

fn cmd_selfcheck(fixtures: Option<PathBuf>, out: &mut Csv) -> anyhow::Result<bool> {
    let golden = match fixtures {
        Some(dir) => load_fixtures(&dir)?,
        None => GoldenData::embedded(),
    };
    let report = selfcheck::run(&golden);
    out.write_record(["suite", "checked", "max_deviation", "tolerance", "status"])?;
    for s in &report.suites {
        let status = if s.passed() { "pass" } else { "fail" };
        out.write_record([
            s.name.clone(),
            s.checked.to_string(),
            real(s.max_deviation),
            real(s.tolerance),
            status.into(),
        ])?;
    }
    out.flush()?;
    for s in report.suites.iter().filter(|s| !s.passed()) {
        if let Some(case) = &s.first_failure {
            eprintln!("{}: first failure {case}", s.name);
        }
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let mut out = csv_out();
    match cli.command {
        Command::Pmf { dist, params, cdf } => cmd_pmf(dist, &params, cdf, &mut out)?,
        Command::Sample { scheme, params, trials, seed, empirical_pmf } => {
            cmd_sample(scheme, &params, trials, seed, empirical_pmf, &mut out)?
        }
        Command::Modes { n, c, m } => cmd_modes(n, c, m, &mut out)?,
        Command::Mle { n, c, y, profile } => cmd_mle(n, c, y, profile, &mut out)?,
        Command::Figure { which } => cmd_figure(which, &mut out)?,
        Command::Selfcheck { fixtures } => {
            if !cmd_selfcheck(fixtures, &mut out)? {
                return Ok(ExitCode::from(1));
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    let io = e.downcast_ref::<io::Error>().or_else(|| match e.downcast_ref::<csv::Error>()?.kind() {
        csv::ErrorKind::Io(io) => Some(io),
        _ => None,
    });
    io.is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            // a closed pipe downstream is not an error worth reporting
            if is_broken_pipe(&e) {
                return ExitCode::SUCCESS;
            }
            let _ = writeln!(io::stderr(), "error: {e:#}");
            ExitCode::from(2)
        }
    }
}
