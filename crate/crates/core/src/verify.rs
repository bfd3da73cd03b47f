//! Exhaustive and randomized sweeps over the identities. Each sweep reports
//! how many cases it checked and the first counterexample, if any; "first"
//! is in sweep order and does not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doublesum::{
    double_sum_blocked, double_sum_naive_with, main_identity_residuals, Method,
};
use crate::error::Result;
use crate::identities::{
    bracket, lemma3_sum, lemma4_expected, lemma4_sum, meissel_sum_blocked, nested_floor_check,
};
use crate::mertens::MertensTable;
use crate::moebius::sieve_full;

/// Seed used by the CLI and acceptance suite unless told otherwise.
pub const DEFAULT_SEED: u64 = 0x5eed_2013;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub name: String,
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Runs `check` on every item, returning the first failure in item order.
fn first_failure<T, F>(items: Vec<T>, check: F) -> Option<String>
where
    T: Send + Sync,
    F: Fn(&T) -> Option<String> + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().find_map_first(check)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find_map(check)
    }
}

fn report(name: impl Into<String>, cases: u64, counterexample: Option<String>) -> SweepReport {
    SweepReport {
        name: name.into(),
        cases,
        counterexample,
    }
}

/// `(m, j)` pairs with `1 ≤ j ≤ m ≤ m_max`.
fn all_pairs(m_max: u64) -> Vec<(u64, u64)> {
    (1..=m_max)
        .flat_map(|m| (1..=m).map(move |j| (m, j)))
        .collect()
}

/// `count` pairs with `1 ≤ j ≤ m ≤ m_max`, drawn from a seeded stream.
pub fn random_pairs(count: usize, m_max: u64, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(1..=m_max);
            (m, rng.gen_range(1..=m))
        })
        .collect()
}

/// `count` values in `[lo, hi]` from a seeded stream.
pub fn random_values(count: usize, lo: u64, hi: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Meissel's identity for every `m ≤ m_max`.
pub fn sweep_meissel(m_max: u64) -> Result<SweepReport> {
    let table = MertensTable::new(m_max)?;
    let fail = first_failure((1..=m_max).collect(), |&m| {
        match meissel_sum_blocked(m, &table) {
            Ok(1) => None,
            Ok(v) => Some(format!("m = {m}: sum = {v}")),
            Err(e) => Some(format!("m = {m}: {e}")),
        }
    });
    Ok(report(format!("meissel m<={m_max}"), m_max, fail))
}

fn lemma3_cases(name: String, pairs: Vec<(u64, u64)>) -> Result<SweepReport> {
    let m_max = pairs.iter().map(|p| p.0).max().unwrap_or(1);
    let mu = sieve_full(m_max)?;
    let cases = pairs.len() as u64;
    let fail = first_failure(pairs, |&(m, j)| match lemma3_sum(m, j, &mu) {
        Ok(1) => None,
        Ok(v) => Some(format!("(m, j) = ({m}, {j}): sum = {v}")),
        Err(e) => Some(format!("(m, j) = ({m}, {j}): {e}")),
    });
    Ok(report(name, cases, fail))
}

fn lemma4_cases(name: String, pairs: Vec<(u64, u64)>) -> Result<SweepReport> {
    let m_max = pairs.iter().map(|p| p.0).max().unwrap_or(1);
    let mu = sieve_full(m_max)?;
    let cases = pairs.len() as u64;
    let fail = first_failure(pairs, |&(m, j)| {
        let expected = lemma4_expected(m, j);
        match lemma4_sum(m, j, &mu) {
            Ok(v) if v == expected => None,
            Ok(v) => Some(format!(
                "(m, j) = ({m}, {j}): sum = {v}, expected {expected}"
            )),
            Err(e) => Some(format!("(m, j) = ({m}, {j}): {e}")),
        }
    });
    Ok(report(name, cases, fail))
}

pub fn sweep_lemma3(m_max: u64) -> Result<SweepReport> {
    lemma3_cases(format!("lemma3 j<=m<={m_max}"), all_pairs(m_max))
}

pub fn sweep_lemma3_random(count: usize, m_max: u64, seed: u64) -> Result<SweepReport> {
    lemma3_cases(
        format!("lemma3 {count} random m<={m_max}"),
        random_pairs(count, m_max, seed),
    )
}

pub fn sweep_lemma4(m_max: u64) -> Result<SweepReport> {
    lemma4_cases(format!("lemma4 j<=m<={m_max}"), all_pairs(m_max))
}

/// `j = ⌊m/2⌋` and `j = ⌊m/2⌋ + 1` for every `m ≤ m_max`.
pub fn sweep_lemma4_boundary(m_max: u64) -> Result<SweepReport> {
    let pairs = (1..=m_max)
        .flat_map(|m| [(m, m / 2), (m, m / 2 + 1)])
        .filter(|&(m, j)| j >= 1 && j <= m)
        .collect();
    lemma4_cases(format!("lemma4 boundary m<={m_max}"), pairs)
}

pub fn sweep_lemma4_random(count: usize, m_max: u64, seed: u64) -> Result<SweepReport> {
    lemma4_cases(
        format!("lemma4 {count} random m<={m_max}"),
        random_pairs(count, m_max, seed),
    )
}

/// Nested floor identity over the full cube `m, j, k ≤ limit`.
pub fn sweep_nested_floor(limit: u64) -> Result<SweepReport> {
    let fail = first_failure((1..=limit).collect(), |&m| {
        for j in 1..=limit {
            for k in 1..=limit {
                match nested_floor_check(m, j, k) {
                    Ok(true) => {}
                    Ok(false) => {
                        return Some(format!(
                            "(m, j, k) = ({m}, {j}, {k}): {} vs {}",
                            (m / j) / k,
                            m / (j * k)
                        ))
                    }
                    Err(e) => return Some(e.to_string()),
                }
            }
        }
        None
    });
    Ok(report(
        format!("nested floor m,j,k<={limit}"),
        limit.pow(3),
        fail,
    ))
}

/// Random 64-bit triples for the nested floor identity.
pub fn sweep_nested_floor_random(count: usize, seed: u64) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<(u64, u64, u64)> = (0..count)
        .map(|_| {
            // mix full-width and small divisors so both floors are exercised
            let m = rng.gen_range(1..=u64::MAX);
            let width = rng.gen_range(1..=64u32);
            let j = rng.gen_range(1..=u64::MAX >> (64 - width));
            let shift = rng.gen_range(0..64u32);
            let k = rng.gen_range(1..=u64::MAX >> shift);
            (m, j, k)
        })
        .collect();
    let fail = first_failure(triples, |&(m, j, k)| match nested_floor_check(m, j, k) {
        Ok(true) => None,
        Ok(false) => Some(format!("(m, j, k) = ({m}, {j}, {k})")),
        Err(e) => Some(e.to_string()),
    });
    Ok(report(
        format!("nested floor {count} random u64"),
        count as u64,
        fail,
    ))
}

/// Bracket ∈ {0, 1} and equal to the parity of `⌊m/(jk)⌋` for `j, k ≤ m ≤ m_max`.
pub fn sweep_bracket(m_max: u64) -> Result<SweepReport> {
    let fail = first_failure((1..=m_max).collect(), |&m| {
        for j in 1..=m {
            for k in 1..=m {
                let b = match bracket(m, j, k) {
                    Ok(b) => b,
                    Err(e) => return Some(e.to_string()),
                };
                let parity = (m / (j * k) % 2) as u8;
                if b.value > 1 || b.value != parity {
                    return Some(format!(
                        "(m, j, k) = ({m}, {j}, {k}): value {}, parity {parity}",
                        b.value
                    ));
                }
            }
        }
        None
    });
    let cases = (1..=m_max).map(|m| m * m).sum();
    Ok(report(format!("bracket j,k<=m<={m_max}"), cases, fail))
}

/// Blocked and naive double sums agree for every `n ≤ n_max`.
pub fn sweep_double_sum_oracle(n_max: u64) -> Result<SweepReport> {
    double_sum_oracle_cases(format!("S blocked=naive n<={n_max}"), (1..=n_max).collect())
}

pub fn sweep_double_sum_oracle_random(count: usize, n_max: u64, seed: u64) -> Result<SweepReport> {
    double_sum_oracle_cases(
        format!("S blocked=naive {count} random n<={n_max}"),
        random_values(count, 1, n_max, seed),
    )
}

fn double_sum_oracle_cases(name: String, ns: Vec<u64>) -> Result<SweepReport> {
    let n_max = ns.iter().copied().max().unwrap_or(1);
    let mu = sieve_full(n_max)?;
    let table = MertensTable::from_block(&mu)?;
    let cases = ns.len() as u64;
    let fail = first_failure(ns, |&n| {
        let naive = double_sum_naive_with(n, &mu);
        let blocked = double_sum_blocked(n, &table);
        match (naive, blocked) {
            (Ok(a), Ok(b)) if a.s == b.s => None,
            (Ok(a), Ok(b)) => Some(format!("n = {n}: naive {} vs blocked {}", a.s, b.s)),
            (Err(e), _) | (_, Err(e)) => Some(format!("n = {n}: {e}")),
        }
    });
    Ok(report(name, cases, fail))
}

/// `M(n²) − 2M(⌊n²/2⌋) = −S(n) − 2M(n)` for the given `n` values.
pub fn sweep_main_identity(name: String, ns: &[u64], method: Method) -> Result<SweepReport> {
    let samples = main_identity_residuals(ns, method)?;
    let fail = samples.iter().find(|s| s.residual != 0).map(|s| {
        format!(
            "n = {}: residual {} (S = {}, M(n) = {}, M(n²) = {}, M(n²/2) = {})",
            s.n, s.residual, s.s, s.m_n, s.m_square, s.m_half_square
        )
    });
    Ok(report(name, ns.len() as u64, fail))
}

/// For `n ≤ n_max` and every `x ∈ [n², (n+1)²)`:
/// `|M(x) − M(n²)| ≤ 2n`, `|M(⌊x/2⌋) − M(⌊n²/2⌋)| ≤ n`, `|D(x) − D(n²)| ≤ 4n`.
pub fn sweep_bridging_bound(n_max: u64) -> Result<SweepReport> {
    let table = MertensTable::new((n_max + 1) * (n_max + 1))?;
    let d = |x: u64| table.m(x) - 2 * table.m(x / 2);
    let cases = (1..=n_max).map(|n| 2 * n + 1).sum();
    let fail = first_failure((1..=n_max).collect(), |&n| {
        let sq = n * n;
        let bound = n as i64;
        for x in sq..(n + 1) * (n + 1) {
            let full = (table.m(x) - table.m(sq)).abs();
            let half = (table.m(x / 2) - table.m(sq / 2)).abs();
            let diff = (d(x) - d(sq)).abs();
            if full > 2 * bound || half > bound || diff > 4 * bound {
                return Some(format!(
                    "n = {n}, x = {x}: |ΔM| = {full}, |ΔM(half)| = {half}, |ΔD| = {diff}"
                ));
            }
        }
        None
    });
    Ok(report(format!("bridging bound n<={n_max}"), cases, fail))
}

/// Coefficient partial sums equal D(x) for every `x ≤ x_max`.
pub fn sweep_partial_sums(x_max: u64) -> Result<SweepReport> {
    let mu = sieve_full(x_max)?;
    let table = MertensTable::from_block(&mu)?;
    let fail = crate::criterion::partial_sum_first_mismatch(&mu, &table)?
        .map(|(x, partial, d)| format!("x = {x}: partial sum {partial}, D(x) = {d}"));
    Ok(report(
        format!("series partial sums x<={x_max}"),
        x_max,
        fail,
    ))
}

/// Sizes of a full `verify` run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyPlan {
    /// Exhaustive bound for the `lemma3_sum` and `lemma4_sum` sweeps, boundary rows included.
    pub m_max: u64,
    pub meissel_max: u64,
    pub random_cases: usize,
    pub random_m_max: u64,
    pub nested_floor_max: u64,
    pub nested_floor_random: usize,
    pub bracket_max: u64,
    pub seed: u64,
}

impl Default for VerifyPlan {
    fn default() -> Self {
        VerifyPlan {
            m_max: 400,
            meissel_max: 100_000,
            random_cases: 1000,
            random_m_max: 10_000,
            nested_floor_max: 500,
            nested_floor_random: 10_000,
            bracket_max: 1000,
            seed: DEFAULT_SEED,
        }
    }
}

impl VerifyPlan {
    /// Runs every identity sweep in a fixed order.
    pub fn run(&self) -> Result<Vec<SweepReport>> {
        let s = self.seed;
        Ok(vec![
            sweep_meissel(self.meissel_max)?,
            sweep_lemma3(self.m_max)?,
            sweep_lemma3_random(self.random_cases, self.random_m_max, s)?,
            sweep_lemma4(self.m_max)?,
            sweep_lemma4_boundary(self.m_max)?,
            sweep_lemma4_random(self.random_cases, self.random_m_max, s.wrapping_add(1))?,
            sweep_nested_floor(self.nested_floor_max)?,
            sweep_nested_floor_random(self.nested_floor_random, s.wrapping_add(2))?,
            sweep_bracket(self.bracket_max)?,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_plan_passes() {
        let plan = VerifyPlan {
            m_max: 60,
            meissel_max: 3000,
            random_cases: 50,
            random_m_max: 500,
            nested_floor_max: 40,
            nested_floor_random: 200,
            bracket_max: 60,
            seed: 7,
        };
        for r in plan.run().unwrap() {
            assert!(r.passed(), "{r:?}");
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn random_streams_are_reproducible() {
        assert_eq!(random_pairs(20, 100, 3), random_pairs(20, 100, 3));
        assert!(random_pairs(200, 100, 3)
            .iter()
            .all(|&(m, j)| 1 <= j && j <= m && m <= 100));
        assert_ne!(
            random_values(20, 1, 1 << 40, 1),
            random_values(20, 1, 1 << 40, 2)
        );
    }

    #[test]
    fn first_failure_is_in_order() {
        let fail = first_failure((1..=1000u64).collect(), |&n| {
            (n % 97 == 0).then(|| n.to_string())
        });
        assert_eq!(fail.as_deref(), Some("97"));
    }

    #[test]
    fn small_sweeps() {
        assert!(sweep_bridging_bound(40).unwrap().passed());
        assert!(sweep_partial_sums(5000).unwrap().passed());
        assert!(sweep_double_sum_oracle(60).unwrap().passed());
        let ns: Vec<u64> = (2..=40).collect();
        assert!(sweep_main_identity("small".into(), &ns, Method::Naive)
            .unwrap()
            .passed());
    }

    #[test]
    fn main_identity_sweep_reports_n_equal_one() {
        assert!(sweep_main_identity("n=1".into(), &[1], Method::Naive).is_err());
    }
}
