//! Exact checks of the floor/Möbius identities the double sum is built from.
//!
//! Verifiers return the computed integer rather than a boolean so that a
//! failing case reports the value it actually produced.

use crate::error::{Error, Result};
use crate::mertens::MertensTable;
use crate::moebius::MoebiusBlock;

/// `⌊m/(jk)⌋ − 2⌊m/(2jk)⌋` with its indices; always 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BracketTerm {
    pub m: u64,
    pub j: u64,
    pub k: u64,
    pub value: u8,
}

/// `⌊m/(jk)⌋`; a product that overflows 64 bits exceeds `m` and floors to 0.
#[inline]
fn floor_div_product(m: u64, j: u64, k: u64) -> u64 {
    j.checked_mul(k).map_or(0, |jk| m / jk)
}

/// The bracket value by literal evaluation of both floors.
#[inline]
pub(crate) fn bracket_value(m: u64, j: u64, k: u64) -> i64 {
    let Some(jk) = j.checked_mul(k) else {
        return 0;
    };
    if jk > m {
        return 0;
    }
    // 2jk overflowing means 2jk > m, so that floor is 0
    let half = jk.checked_mul(2).map_or(0, |d| m / d);
    (m / jk - 2 * half) as i64
}

pub fn bracket(m: u64, j: u64, k: u64) -> Result<BracketTerm> {
    if m == 0 || j == 0 || k == 0 {
        return Err(Error::domain(format!(
            "bracket needs m, j, k ≥ 1, got ({m}, {j}, {k})"
        )));
    }
    let v = bracket_value(m, j, k);
    debug_assert!(v == 0 || v == 1);
    Ok(BracketTerm {
        m,
        j,
        k,
        value: v as u8,
    })
}

/// Whether `⌊⌊m/j⌋/k⌋ = ⌊m/(jk)⌋`.
pub fn nested_floor_check(m: u64, j: u64, k: u64) -> Result<bool> {
    if m == 0 || j == 0 || k == 0 {
        return Err(Error::domain(format!(
            "nested floor needs m, j, k ≥ 1, got ({m}, {j}, {k})"
        )));
    }
    Ok((m / j) / k == floor_div_product(m, j, k))
}

fn mu_slice(mu: &MoebiusBlock, upto: u64) -> Result<&[i8]> {
    if mu.lo() != 1 || mu.hi() < upto {
        return Err(Error::precondition(format!(
            "μ must be available on [1, {upto}], block covers [{}, {}]",
            mu.lo(),
            mu.hi()
        )));
    }
    Ok(&mu.values()[..upto as usize])
}

/// `Σ_{k≤m} ⌊m/k⌋ μ(k)` term by term.
pub fn meissel_sum(m: u64, mu: &MoebiusBlock) -> Result<i64> {
    if m == 0 {
        return Err(Error::domain("Meissel sum needs m ≥ 1"));
    }
    let mu = mu_slice(mu, m)?;
    Ok((1..=m)
        .zip(mu)
        .map(|(k, &v)| (m / k) as i64 * v as i64)
        .sum())
}

/// `Σ_{k≤m} ⌊m/k⌋ μ(k)` over the O(√m) runs of constant `⌊m/k⌋`, each run
/// contributing `q·(M(k₂) − M(k₁ − 1))`.
pub fn meissel_sum_blocked(m: u64, table: &MertensTable) -> Result<i64> {
    if m == 0 {
        return Err(Error::domain("Meissel sum needs m ≥ 1"));
    }
    if table.n_max() < m {
        return Err(Error::precondition(format!(
            "Mertens table stops at {}, needs {m}",
            table.n_max()
        )));
    }
    let mut total = 0i64;
    let mut k = 1u64;
    while k <= m {
        let q = m / k;
        let k2 = m / q;
        total += q as i64 * (table.m(k2) - table.m(k - 1));
        k = k2 + 1;
    }
    Ok(total)
}

fn check_j(m: u64, j: u64) -> Result<()> {
    if j == 0 {
        return Err(Error::domain("j must be ≥ 1"));
    }
    if j > m {
        return Err(Error::precondition(format!(
            "identity only holds for j ≤ m, got j = {j} > m = {m}"
        )));
    }
    Ok(())
}

/// `Σ_{k≤m} ⌊m/(jk)⌋ μ(k)`; expected to be 1 whenever `j ≤ m`.
pub fn lemma3_sum(m: u64, j: u64, mu: &MoebiusBlock) -> Result<i64> {
    check_j(m, j)?;
    let mu = mu_slice(mu, m)?;
    Ok((1..=m)
        .zip(mu)
        .map(|(k, &v)| floor_div_product(m, j, k) as i64 * v as i64)
        .sum())
}

/// `Σ_{k≤m} bracket(m, j, k) μ(k)`; see [`lemma4_expected`].
pub fn lemma4_sum(m: u64, j: u64, mu: &MoebiusBlock) -> Result<i64> {
    check_j(m, j)?;
    let mu = mu_slice(mu, m)?;
    Ok((1..=m)
        .zip(mu)
        .map(|(k, &v)| bracket_value(m, j, k) * v as i64)
        .sum())
}

/// −1 when `j ≤ m/2` (exact division, i.e. `2j ≤ m`), +1 when `m/2 < j ≤ m`.
pub fn lemma4_expected(m: u64, j: u64) -> i64 {
    if 2 * j as u128 <= m as u128 {
        -1
    } else {
        1
    }
}
