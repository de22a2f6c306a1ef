//! Monte Carlo versions of every stopping rule.
//!
//! The urn is two counters: at each draw the first colour comes out with
//! probability `remaining_first / remaining_total`, which has the same law
//! as shuffling the balls and reading them in order.
//!
//! Randomness comes from [`SimRng`], xoshiro256** seeded through
//! SplitMix64, so a `(seed, trials, params)` triple reproduces the same
//! histogram bit for bit.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::distributions::{BernoulliParams, DistKind, Origin, Params, PmfTable, UrnParams};
use crate::error::{Error, Result};

/// Seedable generator used by every simulation in the crate.
pub type SimRng = Xoshiro256StarStar;

pub fn seeded_rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    First,
    Second,
}

impl Color {
    pub fn label(self) -> &'static str {
        match self {
            Color::First => "first",
            Color::Second => "second",
        }
    }
}

/// One realised experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DrawOutcome {
    /// Draws beyond the minimum the stopping rule needs.
    pub y: u64,
    /// Colour (or outcome) whose `c`-th appearance ended the run.
    pub terminal: Color,
    /// Balls of the first and second colour drawn.
    pub counts: (u64, u64),
}

impl DrawOutcome {
    pub fn total_draws(&self) -> u64 {
        self.counts.0 + self.counts.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: u64,
}

impl SimConfig {
    pub fn new(seed: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        Ok(Self { seed, trials })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Both,
    Either,
    FirstOnly,
}

impl Stop {
    fn done(self, c: u64, a: u64, b: u64) -> bool {
        match self {
            Stop::Both => a >= c && b >= c,
            Stop::Either => a >= c || b >= c,
            Stop::FirstOnly => a >= c,
        }
    }

    fn minimum(self, c: u64) -> u64 {
        match self {
            Stop::Both => 2 * c,
            Stop::Either | Stop::FirstOnly => c,
        }
    }
}

fn finish(stop: Stop, c: u64, counts: (u64, u64), last: Color) -> DrawOutcome {
    DrawOutcome { y: counts.0 + counts.1 - stop.minimum(c), terminal: last, counts }
}

fn run_urn<R: Rng + ?Sized>(params: UrnParams, stop: Stop, rng: &mut R) -> DrawOutcome {
    let c = params.c();
    let (mut left_first, mut left_second) = (params.m(), params.n() - params.m());
    let (mut a, mut b) = (0u64, 0u64);
    loop {
        let color = if rng.gen_range(0..left_first + left_second) < left_first {
            left_first -= 1;
            a += 1;
            Color::First
        } else {
            left_second -= 1;
            b += 1;
            Color::Second
        };
        if stop.done(c, a, b) {
            return finish(stop, c, (a, b), color);
        }
    }
}

/// Draws without replacement until both colours have reached `c`.
pub fn draw_until_both<R: Rng + ?Sized>(params: UrnParams, rng: &mut R) -> DrawOutcome {
    run_urn(params, Stop::Both, rng)
}

/// Draws without replacement until either colour reaches `c`.
pub fn draw_until_either<R: Rng + ?Sized>(params: UrnParams, rng: &mut R) -> DrawOutcome {
    run_urn(params, Stop::Either, rng)
}

/// Draws without replacement until the `c`-th first-colour ball; `y`
/// counts the second-colour balls seen on the way.
pub fn draw_until_c_successes<R: Rng + ?Sized>(params: UrnParams, rng: &mut R) -> DrawOutcome {
    run_urn(params, Stop::FirstOnly, rng)
}

/// The three stopping rules driven by i.i.d. Bernoulli(`p`) trials;
/// success counts as the first colour.
pub fn bernoulli_scheme<R: Rng + ?Sized>(params: BernoulliParams, kind: DistKind, rng: &mut R) -> Result<DrawOutcome> {
    let stop = match kind {
        DistKind::NegBinomial => Stop::FirstOnly,
        DistKind::MinNegBinomial => Stop::Either,
        DistKind::MaxNegBinomial => Stop::Both,
        other => return Err(Error::InvalidArgument(format!("{other} is not a Bernoulli scheme"))),
    };
    let c = params.c();
    let (mut a, mut b) = (0u64, 0u64);
    loop {
        let color = if rng.gen_bool(params.p()) {
            a += 1;
            Color::First
        } else {
            b += 1;
            Color::Second
        };
        if stop.done(c, a, b) {
            return Ok(finish(stop, c, (a, b), color));
        }
    }
}

/// Runs one experiment of `kind`.
pub fn draw<R: Rng + ?Sized>(kind: DistKind, params: &Params, rng: &mut R) -> Result<DrawOutcome> {
    match (kind, params) {
        (DistKind::MaxNegHypergeometric, Params::Urn(u)) => Ok(draw_until_both(*u, rng)),
        (DistKind::MinNegHypergeometric, Params::Urn(u)) => Ok(draw_until_either(*u, rng)),
        (DistKind::NegHypergeometric, Params::Urn(u)) => Ok(draw_until_c_successes(*u, rng)),
        (_, Params::Bernoulli(b)) if !kind.is_urn() => bernoulli_scheme(*b, kind, rng),
        _ => Err(Error::InvalidArgument(format!("{kind} does not take {params:?}"))),
    }
}

/// `trials` independent outcomes from one seeded stream.
pub fn sample(kind: DistKind, params: &Params, config: SimConfig) -> Result<Vec<DrawOutcome>> {
    let mut rng = seeded_rng(config.seed);
    (0..config.trials).map(|_| draw(kind, params, &mut rng)).collect()
}

/// Counts of simulated `y` values. Merging is associative and commutative,
/// so streams with distinct seeds can be run separately and combined.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
    trials: u64,
}

impl Histogram {
    pub fn record(&mut self, y: u64) {
        let i = y as usize;
        if i >= self.counts.len() {
            self.counts.resize(i + 1, 0);
        }
        self.counts[i] += 1;
        self.trials += 1;
    }

    pub fn merge(&mut self, other: &Histogram) {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.trials += other.trials;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn count(&self, y: u64) -> u64 {
        self.counts.get(y as usize).copied().unwrap_or(0)
    }
}

pub fn histogram(kind: DistKind, params: &Params, config: SimConfig) -> Result<Histogram> {
    let mut rng = seeded_rng(config.seed);
    let mut h = Histogram::default();
    for _ in 0..config.trials {
        h.record(draw(kind, params, &mut rng)?.y);
    }
    Ok(h)
}

/// Normalised histogram of `config.trials` simulated values.
pub fn empirical_pmf(kind: DistKind, params: impl Into<Params>, config: SimConfig) -> Result<PmfTable> {
    let params = params.into();
    let h = histogram(kind, &params, config)?;
    Ok(histogram_table(kind, params, &h))
}

pub fn histogram_table(kind: DistKind, params: Params, h: &Histogram) -> PmfTable {
    let n = h.trials as f64;
    let probs = h.counts.iter().map(|&k| k as f64 / n).collect();
    PmfTable::new(kind, params, Origin::Empirical { trials: h.trials }, None, probs)
}

/// Total variation distance `(1/2) sum |a(y) - b(y)|` over the union of
/// both supports.
pub fn tv_distance(a: &PmfTable, b: &PmfTable) -> f64 {
    let n = a.len().max(b.len()) as u64;
    0.5 * (0..n).map(|y| (a.prob(y) - b.prob(y)).abs()).sum::<f64>()
}

/// Pearson chi-square goodness of fit of a histogram against a pmf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// Minimum expected count per pooled cell.
pub const MIN_EXPECTED: f64 = 5.0;

/// Chi-square test of `observed` against `expected`. Adjacent cells are
/// pooled left to right until each holds at least [`MIN_EXPECTED`]
/// expected counts; a short final pool joins its neighbour.
pub fn chi_square_gof(observed: &Histogram, expected: &PmfTable) -> Result<GoodnessOfFit> {
    let n = observed.trials as f64;
    let top = expected.len().max(observed.counts.len()) as u64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for y in 0..top {
        obs += observed.count(y) as f64;
        exp += n * expected.prob(y);
        if exp >= MIN_EXPECTED {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if obs > 0.0 || exp > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => cells.push((obs, exp)),
        }
    }
    if cells.len() < 2 {
        return Err(Error::Domain("fewer than two cells after pooling".into()));
    }
    if cells.iter().any(|&(o, e)| e == 0.0 && o > 0.0) {
        // mass where the model has none
        return Ok(GoodnessOfFit { statistic: f64::INFINITY, dof: cells.len() as u64 - 1, p_value: 0.0 });
    }
    let statistic: f64 = cells.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len() as u64 - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(GoodnessOfFit { statistic, dof, p_value: dist.sf(statistic) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{maxnh_pmf, pmf_table};

    fn urn(n: u64, m: u64, c: u64) -> UrnParams {
        UrnParams::new(n, m, c).unwrap()
    }

    fn freq(kind: DistKind, params: impl Into<Params>, seed: u64, trials: u64) -> PmfTable {
        empirical_pmf(kind, params, SimConfig::new(seed, trials).unwrap()).unwrap()
    }

    #[test]
    fn degenerate_urn_always_gives_zero() {
        let mut rng = seeded_rng(9);
        for _ in 0..100 {
            let o = draw_until_both(urn(6, 3, 3), &mut rng);
            assert_eq!(o.y, 0);
            assert_eq!(o.counts, (3, 3));
        }
    }

    #[test]
    fn outcome_shapes() {
        let mut rng = seeded_rng(1);
        let p = urn(20, 7, 3);
        for _ in 0..2000 {
            let o = draw_until_both(p, &mut rng);
            assert!(o.counts == (3, 3 + o.y) || o.counts == (3 + o.y, 3));
            assert_eq!(o.total_draws(), 2 * 3 + o.y);
            let terminal_count = if o.terminal == Color::First { o.counts.0 } else { o.counts.1 };
            assert_eq!(terminal_count, 3);

            let e = draw_until_either(p, &mut rng);
            assert!(e.y <= 2);
            assert!((e.counts.0 == 3) ^ (e.counts.1 == 3));
            assert_eq!(e.total_draws(), 3 + e.y);

            let s = draw_until_c_successes(p, &mut rng);
            assert_eq!(s.counts, (3, s.y));
            assert!(s.y <= 13);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let p = urn(15, 6, 3);
        let a = draw_until_both(p, &mut seeded_rng(42));
        let b = draw_until_both(p, &mut seeded_rng(42));
        assert_eq!(a, b);
        let cfg = SimConfig::new(7, 5000).unwrap();
        let params: Params = p.into();
        assert_eq!(
            histogram(DistKind::MaxNegHypergeometric, &params, cfg).unwrap(),
            histogram(DistKind::MaxNegHypergeometric, &params, cfg).unwrap()
        );
    }

    #[test]
    fn single_ball_of_first_colour() {
        let t = freq(DistKind::MaxNegHypergeometric, urn(5, 1, 1), 3, 100_000);
        assert!((t.prob(0) - 0.4).abs() < 0.01);
    }

    #[test]
    fn either_scheme() {
        let mut rng = seeded_rng(5);
        for _ in 0..100 {
            assert_eq!(draw_until_either(urn(4, 2, 1), &mut rng).y, 0);
        }
        let t = freq(DistKind::MinNegHypergeometric, urn(5, 2, 2), 11, 100_000);
        assert!((t.prob(0) - 0.4).abs() < 0.01);
        assert!(t.len() <= 2);
    }

    #[test]
    fn c_successes_scheme() {
        let t = freq(DistKind::NegHypergeometric, urn(3, 2, 1), 13, 100_000);
        assert!((t.prob(0) - 2.0 / 3.0).abs() < 0.01);
        let mut rng = seeded_rng(2);
        for _ in 0..200 {
            assert!(draw_until_c_successes(urn(8, 4, 4), &mut rng).y <= 4);
        }
    }

    #[test]
    fn bernoulli_schemes() {
        let b = BernoulliParams::new(3, 0.4).unwrap();
        let t = freq(DistKind::MaxNegBinomial, b, 17, 1_000_000);
        assert!((t.prob(0) - 0.27648).abs() < 0.002);

        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            let one = BernoulliParams::new(1, 0.77).unwrap();
            assert_eq!(bernoulli_scheme(one, DistKind::MinNegBinomial, &mut rng).unwrap().y, 0);
        }
        let geo = freq(DistKind::NegBinomial, BernoulliParams::new(1, 0.5).unwrap(), 19, 1_000_000);
        assert!((crate::distributions::mean(&geo) - 1.0).abs() < 0.01);
        assert!(bernoulli_scheme(b, DistKind::MaxNegHypergeometric, &mut rng).is_err());
    }

    #[test]
    fn empirical_tables() {
        let t = freq(DistKind::MaxNegHypergeometric, urn(15, 6, 3), 23, 1);
        assert_eq!(t.iter().filter(|&(_, p)| p > 0.0).count(), 1);
        assert!((t.total() - 1.0).abs() < 1e-15);
        assert!(SimConfig::new(1, 0).is_err());

        let p = urn(15, 6, 3);
        let sim = freq(DistKind::MaxNegHypergeometric, p, 29, 1_000_000);
        let exact = pmf_table(DistKind::MaxNegHypergeometric, p).unwrap();
        assert!(sim.len() <= exact.len());
        let worst = exact.iter().map(|(y, q)| (q - sim.prob(y)).abs()).fold(0.0, f64::max);
        assert!(worst < 0.005, "worst deviation {worst}");
    }

    #[test]
    fn terminal_colour_split_sums_to_pmf() {
        let p = urn(12, 4, 2);
        let mut rng = seeded_rng(31);
        let trials = 400_000u64;
        let mut first = [0u64; 9];
        let mut second = [0u64; 9];
        for _ in 0..trials {
            let o = draw_until_both(p, &mut rng);
            if o.terminal == Color::Second {
                first[o.y as usize] += 1;
            } else {
                second[o.y as usize] += 1;
            }
        }
        for y in 0..9u64 {
            let got = (first[y as usize] + second[y as usize]) as f64 / trials as f64;
            let q = maxnh_pmf(p, y);
            let sd = (q * (1.0 - q) / trials as f64).sqrt();
            assert!((got - q).abs() <= 3.5 * sd + 1e-12, "y={y}");
        }
    }

    #[test]
    fn histograms_merge_associatively() {
        let params: Params = urn(10, 4, 2).into();
        let h = |seed| histogram(DistKind::MaxNegHypergeometric, &params, SimConfig::new(seed, 1000).unwrap()).unwrap();
        let (a, b, c) = (h(1), h(2), h(3));
        let mut left = a.clone();
        left.merge(&b);
        left.merge(&c);
        let mut right = c.clone();
        let mut bc = b.clone();
        bc.merge(&a);
        right.merge(&bc);
        assert_eq!(left, right);
        assert_eq!(left.trials(), 3000);
    }

    #[test]
    fn tv_examples() {
        let kind = DistKind::MaxNegHypergeometric;
        let params: Params = urn(15, 6, 3).into();
        let a = pmf_table(kind, params).unwrap();
        assert_eq!(tv_distance(&a, &a), 0.0);
        let at0 = PmfTable::new(kind, params, Origin::Exact, None, vec![1.0]);
        let at1 = PmfTable::new(kind, params, Origin::Exact, None, vec![0.0, 1.0]);
        assert_eq!(tv_distance(&at0, &at1), 1.0);
    }

    #[test]
    fn chi_square_detects_a_wrong_model() {
        let p = urn(15, 6, 3);
        let params: Params = p.into();
        let h = histogram(DistKind::MaxNegHypergeometric, &params, SimConfig::new(37, 200_000).unwrap()).unwrap();
        let right = pmf_table(DistKind::MaxNegHypergeometric, p).unwrap();
        let wrong = pmf_table(DistKind::MaxNegHypergeometric, urn(15, 7, 3)).unwrap();
        assert!(chi_square_gof(&h, &right).unwrap().p_value > 0.001);
        assert!(chi_square_gof(&h, &wrong).unwrap().p_value < 1e-6);
    }

    #[test]
    fn every_scheme_passes_goodness_of_fit_for_small_urns() {
        let kinds = [DistKind::MaxNegHypergeometric, DistKind::MinNegHypergeometric, DistKind::NegHypergeometric];
        let mut seed = 100;
        for (n, m, c) in [(12, 5, 2), (9, 3, 3), (11, 6, 1), (10, 4, 4)] {
            let p = urn(n, m, c);
            for kind in kinds {
                let exact = pmf_table(kind, p).unwrap();
                if exact.iter().filter(|&(_, q)| q > 0.0).count() < 2 {
                    continue;
                }
                seed += 1;
                let h = histogram(kind, &p.into(), SimConfig::new(seed, 1_000_000).unwrap()).unwrap();
                let fit = chi_square_gof(&h, &exact).unwrap();
                assert!(fit.p_value > 0.001, "{kind} {p:?}: {fit:?}");
            }
        }
    }
}
