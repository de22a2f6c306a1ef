//! Exact reference values for checking the floating-point pmfs.
//!
//! Two independent routes: brute-force enumeration of every colour ordering
//! of a small urn, and the closed-form pmfs evaluated in big-integer
//! rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::distributions::{DistKind, UrnParams};

/// Largest urn [`enumerate`] will walk (`2^N` bit patterns).
pub const MAX_ENUMERATION_N: u64 = 24;

/// Largest urn the rational formulas are meant for.
pub const MAX_EXACT_N: u64 = 60;

/// Exact pmf of `kind` from all `C(N, m)` equally likely orderings:
/// `counts[y]` orderings give `Y = y`, out of `total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Enumeration {
    pub fn prob(&self, y: u64) -> BigRational {
        let count = self.counts.get(y as usize).copied().unwrap_or(0);
        BigRational::new(BigInt::from(count), BigInt::from(self.total))
    }
}

fn stopping_y(kind: DistKind, c: u64, order: u64, n: u64) -> Option<u64> {
    let (mut a, mut b) = (0u64, 0u64);
    for i in 0..n {
        if order >> i & 1 == 1 {
            a += 1;
        } else {
            b += 1;
        }
        let drawn = a + b;
        match kind {
            DistKind::MaxNegHypergeometric if a >= c && b >= c => return Some(drawn - 2 * c),
            DistKind::MinNegHypergeometric if a >= c || b >= c => return Some(drawn - c),
            DistKind::NegHypergeometric if a >= c => return Some(b),
            _ => {}
        }
    }
    None
}

/// Walks every arrangement of `m` first-colour and `N - m` second-colour
/// balls and tallies the stopping value.
///
/// Panics for Bernoulli kinds or `N > MAX_ENUMERATION_N`.
pub fn enumerate(kind: DistKind, params: UrnParams) -> Enumeration {
    assert!(kind.is_urn(), "enumeration needs an urn scheme");
    let (n, m, c) = (params.n(), params.m(), params.c());
    assert!(n <= MAX_ENUMERATION_N, "urn too large to enumerate");
    let mut counts = Vec::new();
    let mut total = 0;
    for order in 0u64..1 << n {
        if u64::from(order.count_ones()) != m {
            continue;
        }
        total += 1;
        let y = stopping_y(kind, c, order, n).expect("every ordering stops") as usize;
        if y >= counts.len() {
            counts.resize(y + 1, 0);
        }
        counts[y] += 1;
    }
    Enumeration { counts, total }
}

fn int(x: u64) -> BigInt {
    BigInt::from(x)
}

/// `C(n, k)`, zero when `k` is negative or above `n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * int(n - i) / int(i + 1);
    }
    acc
}

/// `z (z-1) ... (z-k+1)` on integers.
pub fn falling(z: i64, k: u64) -> BigInt {
    (0..k as i64).map(|i| BigInt::from(z - i)).product()
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Exact negative hypergeometric pmf.
pub fn nh_pmf(params: UrnParams, y: u64) -> BigRational {
    let (n, m, c, y) = (params.n() as i64, params.m() as i64, params.c() as i64, y as i64);
    if y > n - m {
        return BigRational::zero();
    }
    ratio(binomial(c + y - 1, c - 1) * binomial(n - c - y, m - c), binomial(n, m))
}

/// Exact minimum negative hypergeometric pmf.
pub fn minnh_pmf(params: UrnParams, y: u64) -> BigRational {
    let (n, m, c, y) = (params.n() as i64, params.m() as i64, params.c() as i64, y as i64);
    if y >= c {
        return BigRational::zero();
    }
    let ways = binomial(m, c) * binomial(n - m, y) + binomial(m, y) * binomial(n - m, c);
    ratio(binomial(c + y - 1, c - 1) * ways, binomial(c + y, c) * binomial(n, c + y))
}

/// Exact maximum negative hypergeometric pmf, falling-factorial form.
pub fn maxnh_pmf(params: UrnParams, y: u64) -> BigRational {
    let (n, m, c) = (params.n() as i64, params.m() as i64, params.c());
    if y > (params.m() - c).max(params.n() - params.m() - c) {
        return BigRational::zero();
    }
    let paths = falling(m, c + y) * falling(n - m, c) + falling(m, c) * falling(n - m, c + y);
    let lead = binomial((2 * c + y - 1) as i64, (c - 1) as i64);
    ratio(lead * paths, falling(n, 2 * c + y))
}

/// Exact maximum negative hypergeometric pmf, binomial-coefficient form.
pub fn maxnh_pmf_binomial_form(params: UrnParams, y: u64) -> BigRational {
    let (n, m, c, y) = (params.n() as i64, params.m() as i64, params.c() as i64, y as i64);
    let pairs = binomial(m, c + y) * binomial(n - m, c) + binomial(m, c) * binomial(n - m, c + y);
    ratio(int(c as u64) * pairs, int((2 * c + y) as u64) * binomial(n, 2 * c + y))
}

pub fn exact_pmf(kind: DistKind, params: UrnParams, y: u64) -> BigRational {
    match kind {
        DistKind::NegHypergeometric => nh_pmf(params, y),
        DistKind::MinNegHypergeometric => minnh_pmf(params, y),
        DistKind::MaxNegHypergeometric => maxnh_pmf(params, y),
        other => panic!("{other} has no exact urn form"),
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Every valid urn triple with `N <= max_n`.
pub fn urn_triples(max_n: u64) -> Vec<UrnParams> {
    (2..=max_n)
        .flat_map(|n| (1..n).flat_map(move |m| (1..=m).filter_map(move |c| UrnParams::new(n, m, c).ok())))
        .collect()
}
