//! The double sum
//!
//! ```text
//! S(n) = Σ_{j≤n} Σ_{k≤n} (⌊n²/jk⌋ − 2⌊n²/2jk⌋) μ(j) μ(k)
//! ```
//!
//! evaluated two ways. The naive method visits every squarefree pair and is
//! kept as the reference. The blocked method rewrites the bracket as the
//! parity of `⌊m_j/k⌋` with `m_j = ⌊n²/j⌋`, then walks the runs of constant
//! `⌊m_j/k⌋`; each odd run adds `M(k₂) − M(k₁−1)`. That is O(n^{3/2}) work.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::identities::bracket_value;
use crate::mertens::{MertensSource, MertensTable, SegmentedMertens};
use crate::moebius::{sieve_full, MoebiusBlock};

/// Largest `n` for which `n²` (and every `|S(n)| ≤ n²`) fits comfortably in 63 bits.
pub const MAX_N: u64 = 3_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Naive,
    Blocked,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Blocked => "blocked",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "blocked" => Ok(Method::Blocked),
            other => Err(Error::domain(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleSumResult {
    pub n: u64,
    pub s: i64,
    pub method: Method,
    /// Wall time of the evaluation; diagnostic only. Zero on targets without
    /// a clock (wasm32-unknown-unknown).
    pub elapsed: Duration,
}

#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
fn stopwatch() -> impl Fn() -> Duration {
    let started = std::time::Instant::now();
    move || started.elapsed()
}

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
fn stopwatch() -> impl Fn() -> Duration {
    || Duration::ZERO
}

fn check_n(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("S(n) needs n ≥ 1"));
    }
    if n > MAX_N {
        return Err(Error::domain(format!(
            "n = {n} exceeds {MAX_N}; n² would overflow"
        )));
    }
    Ok(n * n)
}

/// S(n) by direct summation over squarefree `(j, k)`; sieves μ itself.
pub fn double_sum_naive(n: u64) -> Result<DoubleSumResult> {
    check_n(n)?;
    double_sum_naive_with(n, &sieve_full(n)?)
}

/// S(n) by direct summation, reading μ from `mu` (which must cover `[1, n]`).
pub fn double_sum_naive_with(n: u64, mu: &MoebiusBlock) -> Result<DoubleSumResult> {
    let m = check_n(n)?;
    if mu.lo() != 1 || mu.hi() < n {
        return Err(Error::precondition(format!(
            "μ must cover [1, {n}], block covers [{}, {}]",
            mu.lo(),
            mu.hi()
        )));
    }
    let elapsed = stopwatch();
    let support: Vec<(u64, i64)> = mu
        .iter()
        .take(n as usize)
        .filter(|&(_, v)| v != 0)
        .map(|(i, v)| (i, v as i64))
        .collect();
    let row = |&(j, mu_j): &(u64, i64)| -> i64 {
        let inner: i64 = support
            .iter()
            .map(|&(k, mu_k)| bracket_value(m, j, k) * mu_k)
            .sum();
        mu_j * inner
    };
    #[cfg(feature = "parallel")]
    let s: i64 = {
        use rayon::prelude::*;
        support.par_iter().map(row).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let s: i64 = support.iter().map(row).sum();
    Ok(DoubleSumResult {
        n,
        s,
        method: Method::Naive,
        elapsed: elapsed(),
    })
}

/// `Σ_{k≤n} parity(⌊m/k⌋) μ(k)` over the runs of constant `⌊m/k⌋`.
/// Returns the sum and the number of runs visited.
#[inline]
fn parity_inner(m: u64, n: u64, table: &MertensTable) -> (i64, u64) {
    let prefix = table.prefix();
    let mut sum = 0i64;
    let mut runs = 0u64;
    let mut k = 1u64;
    while k <= n {
        let q = m / k;
        if q == 0 {
            break;
        }
        let k2 = (m / q).min(n);
        if q & 1 == 1 {
            sum += prefix[k2 as usize] - prefix[(k - 1) as usize];
        }
        runs += 1;
        k = k2 + 1;
    }
    (sum, runs)
}

fn check_table(n: u64, table: &MertensTable) -> Result<u64> {
    let m = check_n(n)?;
    if table.n_max() < n {
        return Err(Error::precondition(format!(
            "Mertens table stops at {}, S({n}) needs it up to {n}",
            table.n_max()
        )));
    }
    Ok(m)
}

fn blocked_fold(n: u64, table: &MertensTable) -> Result<(i64, u64)> {
    let m = check_table(n, table)?;
    let row = |j: u64| -> (i64, u64) {
        let mu_j = table.mu(j) as i64;
        if mu_j == 0 {
            return (0, 0);
        }
        let (inner, runs) = parity_inner(m / j, n, table);
        (mu_j * inner, runs)
    };
    #[cfg(feature = "parallel")]
    let folded = {
        use rayon::prelude::*;
        (1..n as usize + 1)
            .into_par_iter()
            .with_min_len(64)
            .map(|j| row(j as u64))
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    #[cfg(not(feature = "parallel"))]
    let folded = (1..=n).map(row).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(folded)
}

/// S(n) by parity-run blocking against a Mertens table covering `[1, n]`.
pub fn double_sum_blocked(n: u64, table: &MertensTable) -> Result<DoubleSumResult> {
    let elapsed = stopwatch();
    let (s, _) = blocked_fold(n, table)?;
    Ok(DoubleSumResult {
        n,
        s,
        method: Method::Blocked,
        elapsed: elapsed(),
    })
}

/// Number of `⌊m_j/k⌋` runs the blocked method walks for `n`; the work measure
/// behind its O(n^{3/2}) cost.
pub fn blocked_work(n: u64, table: &MertensTable) -> Result<u64> {
    Ok(blocked_fold(n, table)?.1)
}

/// S(n) by the requested method, building whatever table that method needs.
pub fn double_sum(n: u64, method: Method) -> Result<DoubleSumResult> {
    match method {
        Method::Naive => double_sum_naive(n),
        Method::Blocked => {
            check_n(n)?;
            double_sum_blocked(n, &MertensTable::new(n)?)
        }
    }
}

/// The pieces of `[M(n²) − 2M(⌊n²/2⌋)] − [−S(n) − 2M(n)]` for one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidualSample {
    pub n: u64,
    pub s: i64,
    pub m_n: i64,
    pub m_square: i64,
    pub m_half_square: i64,
    pub residual: i64,
}

impl ResidualSample {
    fn new(n: u64, s: i64, m_n: i64, m_square: i64, m_half_square: i64) -> Self {
        let lhs = m_square - 2 * m_half_square;
        let rhs = -s - 2 * m_n;
        ResidualSample {
            n,
            s,
            m_n,
            m_square,
            m_half_square,
            residual: lhs - rhs,
        }
    }
}

/// Residual of `M(n²) − 2M(⌊n²/2⌋) = −S(n) − 2M(n)`; zero for every n ≥ 2.
pub fn main_identity_residual(n: u64, method: Method) -> Result<i64> {
    Ok(main_identity_residuals(&[n], method)?[0].residual)
}

/// Residuals for many `n` sharing one Mertens pass up to `max(n)²` and one
/// μ/Mertens table up to `max(n)`.
pub fn main_identity_residuals(ns: &[u64], method: Method) -> Result<Vec<ResidualSample>> {
    main_identity_residuals_with(&SegmentedMertens::default(), ns, method)
}

pub fn main_identity_residuals_with<S: MertensSource + ?Sized>(
    source: &S,
    ns: &[u64],
    method: Method,
) -> Result<Vec<ResidualSample>> {
    for &n in ns {
        if n <= 1 {
            return Err(Error::precondition(format!(
                "the identity needs n ≥ 2, got n = {n}"
            )));
        }
        check_n(n)?;
    }
    let Some(&n_max) = ns.iter().max() else {
        return Ok(Vec::new());
    };

    let mut queries: Vec<u64> = ns.iter().flat_map(|&n| [n, n * n, n * n / 2]).collect();
    queries.sort_unstable();
    queries.dedup();
    let answers = source.mertens_many(&queries)?;
    let m_at = |x: u64| -> i64 {
        let i = answers
            .binary_search_by_key(&x, |r| r.x)
            .expect("every needed point was queried");
        answers[i].m_of_x
    };

    let table = MertensTable::new(n_max)?;
    let mu = match method {
        Method::Naive => Some(sieve_full(n_max)?),
        Method::Blocked => None,
    };
    ns.iter()
        .map(|&n| {
            let s = match &mu {
                Some(mu) => double_sum_naive_with(n, mu)?.s,
                None => double_sum_blocked(n, &table)?.s,
            };
            Ok(ResidualSample::new(
                n,
                s,
                table.m(n),
                m_at(n * n),
                m_at(n * n / 2),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::mobius_single;

    /// Every one of the n² terms, μ from trial division, both floors literal.
    fn brute_force(n: u64) -> i64 {
        let m = n * n;
        let mut s = 0;
        for j in 1..=n {
            for k in 1..=n {
                let b = (m / (j * k)) as i64 - 2 * (m / (2 * j * k)) as i64;
                s += b
                    * mobius_single(j).unwrap().get() as i64
                    * mobius_single(k).unwrap().get() as i64;
            }
        }
        s
    }

    #[test]
    fn small_values() {
        for (n, expected) in [(1, 1), (2, 1), (3, 2)] {
            assert_eq!(brute_force(n), expected);
            assert_eq!(double_sum_naive(n).unwrap().s, expected);
            assert_eq!(double_sum(n, Method::Blocked).unwrap().s, expected);
        }
    }

    #[test]
    fn naive_matches_brute_force() {
        let mu = sieve_full(120).unwrap();
        for n in 1..=120 {
            assert_eq!(
                double_sum_naive_with(n, &mu).unwrap().s,
                brute_force(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn blocked_matches_naive() {
        let table = MertensTable::new(500).unwrap();
        let mu = sieve_full(500).unwrap();
        for n in 1..=500 {
            let naive = double_sum_naive_with(n, &mu).unwrap();
            let blocked = double_sum_blocked(n, &table).unwrap();
            assert_eq!(blocked.s, naive.s, "n = {n}");
            assert!(naive.s.unsigned_abs() <= n * n);
            let squarefree = mu.values()[..n as usize]
                .iter()
                .filter(|&&v| v != 0)
                .count() as u64;
            assert!(naive.s.unsigned_abs() <= squarefree * squarefree);
        }
    }

    #[test]
    fn preconditions() {
        let table = MertensTable::new(10).unwrap();
        assert!(matches!(
            double_sum_blocked(11, &table),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(double_sum_naive(0), Err(Error::Domain(_))));
        assert!(matches!(double_sum_naive(MAX_N + 1), Err(Error::Domain(_))));
        assert!(matches!(
            main_identity_residual(1, Method::Naive),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn identity_fails_at_one() {
        // M(1) − 2M(0) = 1 while −S(1) − 2M(1) = −3
        let s = double_sum_naive(1).unwrap().s;
        assert_eq!(1 - (-s - 2), 4);
    }

    #[test]
    fn residual_examples() {
        assert_eq!(main_identity_residual(2, Method::Naive).unwrap(), 0);
        assert_eq!(main_identity_residual(3, Method::Naive).unwrap(), 0);
        assert_eq!(main_identity_residual(100, Method::Naive).unwrap(), 0);
        assert_eq!(main_identity_residual(100, Method::Blocked).unwrap(), 0);
        let r = main_identity_residuals(&[2, 3], Method::Naive).unwrap();
        assert_eq!(
            (r[0].m_square, r[0].m_half_square, r[0].s, r[0].m_n),
            (-1, 0, 1, 0)
        );
        assert_eq!(
            (r[1].m_square, r[1].m_half_square, r[1].s, r[1].m_n),
            (-2, -1, 2, -1)
        );
    }

    #[test]
    fn residuals_in_any_order() {
        let r = main_identity_residuals(&[50, 7, 50, 2], Method::Blocked).unwrap();
        assert_eq!(r.iter().map(|s| s.n).collect::<Vec<_>>(), [50, 7, 50, 2]);
        assert!(r.iter().all(|s| s.residual == 0));
    }

    #[test]
    fn work_grows_like_n_to_three_halves() {
        let table = MertensTable::new(8000).unwrap();
        let w1 = blocked_work(4000, &table).unwrap() as f64;
        let w2 = blocked_work(8000, &table).unwrap() as f64;
        let ratio = w2 / w1;
        let target = 2f64.powf(1.5);
        assert!((ratio / target - 1.0).abs() <= 0.25, "ratio {ratio}");
    }
}
