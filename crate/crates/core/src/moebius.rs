//! Möbius function: single values by trial division, bulk values by a linear
//! sieve over `[1, n]`, and windows `[lo, hi]` by a segmented sieve that only
//! needs the primes up to `√hi`.

use crate::error::{Error, MemoryBudget, Result};

/// Default number of entries sieved per segment (2^20).
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 20;

/// A value of μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum MoebiusValue {
    MinusOne = -1,
    Zero = 0,
    One = 1,
}

impl MoebiusValue {
    #[inline]
    pub fn get(self) -> i8 {
        self as i8
    }

    /// Converts a raw `i8`; anything outside `{-1, 0, 1}` is rejected.
    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            -1 => Some(MoebiusValue::MinusOne),
            0 => Some(MoebiusValue::Zero),
            1 => Some(MoebiusValue::One),
            _ => None,
        }
    }

    pub fn is_squarefree(self) -> bool {
        self != MoebiusValue::Zero
    }
}

impl From<MoebiusValue> for i64 {
    fn from(v: MoebiusValue) -> i64 {
        v.get() as i64
    }
}

/// μ(n) by trial factorization.
pub fn mobius_single(n: u64) -> Result<MoebiusValue> {
    if n == 0 {
        return Err(Error::domain("μ is undefined at 0"));
    }
    let mut rest = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d <= rest / d {
        if rest.is_multiple_of(d) {
            rest /= d;
            if rest.is_multiple_of(d) {
                return Ok(MoebiusValue::Zero);
            }
            sign = -sign;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        sign = -sign;
    }
    Ok(MoebiusValue::from_i8(sign).expect("sign is ±1"))
}

/// μ over the contiguous window `[lo, hi]`; `values[i]` holds μ(lo + i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusBlock {
    lo: u64,
    hi: u64,
    values: Vec<i8>,
}

impl MoebiusBlock {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Raw values, `values()[i] = μ(lo + i)`.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// μ(n) if `n` lies inside the window.
    pub fn get(&self, n: u64) -> Option<MoebiusValue> {
        if n < self.lo || n > self.hi {
            return None;
        }
        MoebiusValue::from_i8(self.values[(n - self.lo) as usize])
    }

    /// `(n, μ(n))` pairs in ascending `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        (self.lo..).zip(self.values.iter().copied())
    }

    /// Number of squarefree integers in the window.
    pub fn squarefree_count(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    pub fn into_values(self) -> Vec<i8> {
        self.values
    }
}

/// μ(1..=n) via the linear (smallest-prime-factor) sieve.
pub fn sieve_full(n: u64) -> Result<MoebiusBlock> {
    sieve_full_with_budget(n, MemoryBudget::default())
}

pub fn sieve_full_with_budget(n: u64, budget: MemoryBudget) -> Result<MoebiusBlock> {
    if n == 0 {
        return Err(Error::domain("sieve_full needs n ≥ 1"));
    }
    const HINT: &str = "use sieve_segment for ranges this large";
    // spf (u32) + μ (i8) per entry
    budget.check("linear sieve", n, 5, HINT)?;
    if n > u32::MAX as u64 {
        return Err(Error::Resource {
            what: "linear sieve",
            requested: n.saturating_mul(5),
            budget: budget.0,
            hint: HINT,
        });
    }
    let len = n as usize + 1;
    let mut spf = vec![0u32; len];
    let mut mu = vec![0i8; len];
    let mut primes: Vec<u32> = Vec::new();
    mu[1] = 1;
    for i in 2..len {
        if spf[i] == 0 {
            spf[i] = i as u32;
            mu[i] = -1;
            primes.push(i as u32);
        }
        let spf_i = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > spf_i || ip >= len {
                break;
            }
            spf[ip] = p;
            mu[ip] = if p == spf_i { 0 } else { -mu[i] };
        }
    }
    mu.remove(0);
    Ok(MoebiusBlock {
        lo: 1,
        hi: n,
        values: mu,
    })
}

/// Every prime up to `limit`, with the limit it was sieved to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes up to `limit` inclusive.
    pub fn up_to(limit: u64) -> Self {
        let len = limit as usize + 1;
        let mut composite = vec![false; len.max(2)];
        let mut primes = Vec::new();
        for i in 2..len {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut m = i * i;
            while m < len {
                composite[m] = true;
                m += i;
            }
        }
        PrimeTable { limit, primes }
    }

    /// Primes sufficient to segment-sieve any window ending at `hi`.
    pub fn for_range(hi: u64) -> Self {
        Self::up_to(hi.isqrt())
    }

    /// Wraps an explicit prime list known to contain every prime ≤ `limit`.
    pub fn from_primes(limit: u64, primes: Vec<u64>) -> Result<Self> {
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::precondition("prime list must be strictly ascending"));
        }
        if let Some(&last) = primes.last() {
            if last > limit {
                return Err(Error::precondition(format!(
                    "prime {last} exceeds the declared limit {limit}"
                )));
            }
        }
        Ok(PrimeTable { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }
}

/// μ over `[lo, hi]`: every prime `p ≤ √hi` flips the sign of its multiples and
/// zeroes the multiples of `p²`; a leftover cofactor above 1 is one more prime.
pub fn sieve_segment(lo: u64, hi: u64, primes: &PrimeTable) -> Result<MoebiusBlock> {
    let mut block = MoebiusBlock {
        lo,
        hi,
        values: Vec::new(),
    };
    let mut scratch = Vec::new();
    sieve_segment_into(lo, hi, primes, &mut block, &mut scratch)?;
    Ok(block)
}

/// Like [`sieve_segment`] but reuses the allocations of `out` and `scratch`.
pub(crate) fn sieve_segment_into(
    lo: u64,
    hi: u64,
    primes: &PrimeTable,
    out: &mut MoebiusBlock,
    scratch: &mut Vec<u64>,
) -> Result<()> {
    if lo == 0 || lo > hi {
        return Err(Error::precondition(format!(
            "segment needs 1 ≤ lo ≤ hi, got [{lo}, {hi}]"
        )));
    }
    let root = hi.isqrt();
    if primes.limit < root {
        return Err(Error::precondition(format!(
            "segment [{lo}, {hi}] needs all primes up to {root}, table stops at {}",
            primes.limit
        )));
    }
    let len = usize::try_from(hi - lo + 1)
        .map_err(|_| Error::precondition("segment length exceeds address space"))?;

    let mu = &mut out.values;
    mu.clear();
    mu.resize(len, 1);
    // product of the distinct primes ≤ √hi found so far; ≤ the number itself
    scratch.clear();
    scratch.resize(len, 1);

    for &p in primes.primes.iter().take_while(|&&p| p <= root) {
        let first = lo.div_ceil(p) * p;
        let mut idx = (first - lo) as usize;
        let step = p as usize;
        while idx < len {
            mu[idx] = -mu[idx];
            scratch[idx] *= p;
            idx += step;
        }
        let p2 = p * p;
        if p2 <= hi {
            let first = lo.div_ceil(p2) * p2;
            let mut idx = (first - lo) as usize;
            let step = p2 as usize;
            while idx < len {
                mu[idx] = 0;
                idx += step;
            }
        }
    }
    for (i, (m, &prod)) in mu.iter_mut().zip(scratch.iter()).enumerate() {
        if *m != 0 && prod != lo + i as u64 {
            *m = -*m;
        }
    }
    out.lo = lo;
    out.hi = hi;
    Ok(())
}

/// Streams μ over `[lo, hi]` in ascending segments of `segment_len` entries.
///
/// The callback sees each segment exactly once and in order. With the
/// `parallel` feature several segments are sieved concurrently ahead of the
/// callback; ordering is preserved.
pub fn for_each_segment<F>(lo: u64, hi: u64, segment_len: u64, mut f: F) -> Result<()>
where
    F: FnMut(&MoebiusBlock) -> Result<()>,
{
    if segment_len == 0 {
        return Err(Error::precondition("segment length must be ≥ 1"));
    }
    if lo > hi {
        return Ok(());
    }
    if lo == 0 {
        return Err(Error::domain("μ is undefined at 0"));
    }
    let primes = PrimeTable::for_range(hi);
    let end_of = move |start: u64| start.saturating_add(segment_len - 1).min(hi);
    let next_start = move |start: u64| end_of(start).checked_add(1).filter(|&n| n <= hi);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let width = rayon::current_num_threads().max(1);
        if width > 1 {
            let mut start = Some(lo);
            while let Some(first) = start {
                let mut starts = Vec::with_capacity(width);
                let mut s = Some(first);
                while let Some(x) = s {
                    if starts.len() == width {
                        break;
                    }
                    starts.push(x);
                    s = next_start(x);
                }
                let blocks: Vec<Result<MoebiusBlock>> = starts
                    .par_iter()
                    .map(|&a| sieve_segment(a, end_of(a), &primes))
                    .collect();
                for block in blocks {
                    f(&block?)?;
                }
                start = s;
            }
            return Ok(());
        }
    }

    let mut block = MoebiusBlock {
        lo,
        hi: lo,
        values: Vec::new(),
    };
    let mut scratch = Vec::new();
    let mut start = Some(lo);
    while let Some(a) = start {
        sieve_segment_into(a, end_of(a), &primes, &mut block, &mut scratch)?;
        f(&block)?;
        start = next_start(a);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(block: &MoebiusBlock) -> Vec<i8> {
        block.values().to_vec()
    }

    #[test]
    fn single_values() {
        assert_eq!(mobius_single(1).unwrap(), MoebiusValue::One);
        assert_eq!(mobius_single(12).unwrap(), MoebiusValue::Zero);
        assert_eq!(mobius_single(10).unwrap(), MoebiusValue::One);
        assert_eq!(mobius_single(30).unwrap(), MoebiusValue::MinusOne);
        assert_eq!(mobius_single(97).unwrap(), MoebiusValue::MinusOne);
        // 2^61 - 1 is prime
        assert_eq!(
            mobius_single((1 << 61) - 1).unwrap(),
            MoebiusValue::MinusOne
        );
        assert_eq!(mobius_single(u64::MAX).unwrap().get(), -1); // 3·5·17·257·641·65537·6700417
    }

    #[test]
    fn zero_is_a_domain_error() {
        assert!(matches!(mobius_single(0), Err(Error::Domain(_))));
        assert!(matches!(sieve_full(0), Err(Error::Domain(_))));
    }

    #[test]
    fn full_sieve_small() {
        assert_eq!(
            raw(&sieve_full(10).unwrap()),
            [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
        );
        assert_eq!(raw(&sieve_full(1).unwrap()), [1]);
        assert_eq!(raw(&sieve_full(4).unwrap()), [1, -1, -1, 0]);
    }

    #[test]
    fn full_sieve_matches_trial_division() {
        let block = sieve_full(100_000).unwrap();
        for (n, v) in block.iter() {
            assert_eq!(v, mobius_single(n).unwrap().get(), "n = {n}");
        }
    }

    #[test]
    fn full_sieve_respects_budget() {
        let err = sieve_full_with_budget(1000, MemoryBudget(100)).unwrap_err();
        match err {
            Error::Resource { hint, .. } => assert!(hint.contains("sieve_segment")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn segment_examples() {
        let primes = PrimeTable::for_range(100);
        assert_eq!(
            raw(&sieve_segment(1, 10, &primes).unwrap()),
            raw(&sieve_full(10).unwrap())
        );
        assert_eq!(
            raw(&sieve_segment(95, 100, &primes).unwrap()),
            [1, 0, -1, 0, 0, 0]
        );
        assert_eq!(raw(&sieve_segment(97, 97, &primes).unwrap()), [-1]);
    }

    #[test]
    fn segment_rejects_short_prime_table() {
        let primes = PrimeTable::up_to(6);
        assert!(sieve_segment(1, 48, &primes).is_ok());
        assert!(matches!(
            sieve_segment(1, 49, &primes),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            sieve_segment(5, 4, &primes),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn segment_far_from_origin() {
        let lo = 1_000_000_000_000 - 50;
        let hi = 1_000_000_000_000 + 50;
        let block = sieve_segment(lo, hi, &PrimeTable::for_range(hi)).unwrap();
        for (n, v) in block.iter() {
            assert_eq!(v, mobius_single(n).unwrap().get(), "n = {n}");
        }
    }

    #[test]
    fn streaming_covers_range_in_order() {
        let full = sieve_full(10_000).unwrap();
        let mut seen = Vec::new();
        let mut next = 1;
        for_each_segment(1, 10_000, 777, |b| {
            assert_eq!(b.lo(), next);
            next = b.hi() + 1;
            seen.extend_from_slice(b.values());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, full.values());
    }

    #[test]
    fn squarefree_density() {
        let n = 100_000;
        let density = sieve_full(n).unwrap().squarefree_count() as f64 / n as f64;
        assert!((density - 0.6079).abs() <= 0.02, "density {density}");
    }

    #[test]
    fn prime_table() {
        assert_eq!(
            PrimeTable::up_to(30).primes(),
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
        assert!(PrimeTable::up_to(1).primes().is_empty());
        assert!(PrimeTable::from_primes(10, vec![3, 2]).is_err());
        assert!(PrimeTable::from_primes(2, vec![2, 3]).is_err());
    }
}
