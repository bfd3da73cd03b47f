//! Exact Mertens sums M(x) = Σ_{k≤x} μ(k).
//!
//! Small ranges are held in a [`MertensTable`]. Large `x` are answered by a
//! single left-to-right segmented-sieve pass ([`SegmentedMertens`]) that
//! records M at each requested point; the pass can start from any known
//! `(x, M(x))` pair, which is what checkpoint resume builds on.

use crate::error::{Error, MemoryBudget, Result};
use crate::moebius::{self, MoebiusBlock, DEFAULT_SEGMENT_LEN};

/// Exact prefix sums `prefix[i] = M(i)` for `0 ≤ i ≤ n_max`, with M(0) = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MertensTable {
    prefix: Vec<i64>,
}

impl MertensTable {
    pub fn new(n: u64) -> Result<Self> {
        Self::with_budget(n, MemoryBudget::default())
    }

    pub fn with_budget(n: u64, budget: MemoryBudget) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("Mertens table needs n ≥ 1"));
        }
        budget.check(
            "Mertens table",
            n.saturating_add(1),
            8,
            "answer large points with mertens_many instead",
        )?;
        let mut prefix = Vec::with_capacity(n as usize + 1);
        prefix.push(0i64);
        let mut acc = 0i64;
        moebius::for_each_segment(1, n, DEFAULT_SEGMENT_LEN, |block| {
            prefix.extend(block.values().iter().map(|&v| {
                acc += v as i64;
                acc
            }));
            Ok(())
        })?;
        Ok(MertensTable { prefix })
    }

    /// Cumulative sums of a block that starts at 1.
    pub fn from_block(block: &MoebiusBlock) -> Result<Self> {
        if block.lo() != 1 {
            return Err(Error::precondition("Mertens table block must start at 1"));
        }
        let mut prefix = Vec::with_capacity(block.len() + 1);
        prefix.push(0);
        let mut acc = 0i64;
        for &v in block.values() {
            acc += v as i64;
            prefix.push(acc);
        }
        Ok(MertensTable { prefix })
    }

    pub fn n_max(&self) -> u64 {
        (self.prefix.len() - 1) as u64
    }

    /// M(x), or `None` past the end of the table.
    #[inline]
    pub fn get(&self, x: u64) -> Option<i64> {
        self.prefix.get(usize::try_from(x).ok()?).copied()
    }

    /// M(x). Panics if `x > n_max`.
    #[inline]
    pub fn m(&self, x: u64) -> i64 {
        self.prefix[x as usize]
    }

    /// μ(i) recovered as M(i) − M(i − 1). Panics unless `1 ≤ i ≤ n_max`.
    #[inline]
    pub fn mu(&self, i: u64) -> i8 {
        let i = i as usize;
        assert!(i >= 1, "μ is undefined at 0");
        (self.prefix[i] - self.prefix[i - 1]) as i8
    }

    /// `[M(0), M(1), …, M(n_max)]`.
    pub fn prefix(&self) -> &[i64] {
        &self.prefix
    }
}

/// Convenience wrapper around [`MertensTable::new`].
pub fn mertens_table(n: u64) -> Result<MertensTable> {
    MertensTable::new(n)
}

/// A persisted `(x, M(x))` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CheckpointRecord {
    pub x: u64,
    pub m_of_x: i64,
}

impl CheckpointRecord {
    /// The empty-sum starting point (0, M(0) = 0).
    pub const ORIGIN: CheckpointRecord = CheckpointRecord { x: 0, m_of_x: 0 };

    pub fn new(x: u64, m_of_x: i64) -> Self {
        CheckpointRecord { x, m_of_x }
    }
}

/// `D(x) = M(x) − 2·M(⌊x/2⌋)` together with its two ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DifferenceSample {
    pub x: u64,
    pub m_x: i64,
    pub m_half: i64,
    pub d: i64,
}

impl DifferenceSample {
    pub fn new(x: u64, m_x: i64, m_half: i64) -> Self {
        DifferenceSample {
            x,
            m_x,
            m_half,
            d: m_x - 2 * m_half,
        }
    }
}

/// Anything that can answer ascending batches of M(x) queries.
///
/// The segmented sieve is the only implementation today; a sub-linear
/// combinatorial method would slot in here.
pub trait MertensSource {
    /// Answers `queries` (strictly ascending, each ≥ `start.x`) given that
    /// `start` is a correct `(x, M(x))` pair.
    fn mertens_many_from(
        &self,
        start: CheckpointRecord,
        queries: &[u64],
    ) -> Result<Vec<CheckpointRecord>>;

    fn mertens_many(&self, queries: &[u64]) -> Result<Vec<CheckpointRecord>> {
        self.mertens_many_from(CheckpointRecord::ORIGIN, queries)
    }
}

/// One streaming pass of the segmented Möbius sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentedMertens {
    pub segment_len: u64,
}

impl Default for SegmentedMertens {
    fn default() -> Self {
        SegmentedMertens {
            segment_len: DEFAULT_SEGMENT_LEN,
        }
    }
}

impl SegmentedMertens {
    pub fn new(segment_len: u64) -> Result<Self> {
        if segment_len == 0 {
            return Err(Error::precondition("segment length must be ≥ 1"));
        }
        Ok(SegmentedMertens { segment_len })
    }
}

fn check_queries(start: CheckpointRecord, queries: &[u64]) -> Result<()> {
    if let Some(&q) = queries.first() {
        if q == 0 {
            return Err(Error::precondition("Mertens queries must be ≥ 1"));
        }
        if q < start.x {
            return Err(Error::precondition(format!(
                "query {q} lies before the resume point {}",
                start.x
            )));
        }
    }
    if let Some(w) = queries.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::precondition(format!(
            "Mertens queries must be strictly ascending ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

impl MertensSource for SegmentedMertens {
    fn mertens_many_from(
        &self,
        start: CheckpointRecord,
        queries: &[u64],
    ) -> Result<Vec<CheckpointRecord>> {
        check_queries(start, queries)?;
        let mut out = Vec::with_capacity(queries.len());
        let mut pending = queries;
        // queries equal to the resume point need no sieving
        while let Some((&q, rest)) = pending.split_first() {
            if q != start.x {
                break;
            }
            out.push(start);
            pending = rest;
        }
        let Some(&last) = pending.last() else {
            return Ok(out);
        };

        let mut acc = start.m_of_x;
        moebius::for_each_segment(start.x + 1, last, self.segment_len, |block| {
            let values = block.values();
            let mut cursor = 0usize;
            while let Some((&q, rest)) = pending.split_first() {
                if q > block.hi() {
                    break;
                }
                let upto = (q - block.lo()) as usize + 1;
                acc += sum_i8(&values[cursor..upto]);
                cursor = upto;
                out.push(CheckpointRecord::new(q, acc));
                pending = rest;
            }
            acc += sum_i8(&values[cursor..]);
            Ok(())
        })?;
        Ok(out)
    }
}

#[inline]
fn sum_i8(values: &[i8]) -> i64 {
    values.iter().map(|&v| v as i64).sum()
}

/// M at each point of a strictly ascending query list, in one pass.
pub fn mertens_many(queries: &[u64]) -> Result<Vec<CheckpointRecord>> {
    SegmentedMertens::default().mertens_many(queries)
}

/// M at each query, continuing from a known `(x, M(x))` pair.
pub fn mertens_many_from(
    start: CheckpointRecord,
    queries: &[u64],
) -> Result<Vec<CheckpointRecord>> {
    SegmentedMertens::default().mertens_many_from(start, queries)
}

/// D(x) = M(x) − 2·M(⌊x/2⌋).
pub fn difference(x: u64) -> Result<DifferenceSample> {
    if x == 0 {
        return Err(Error::domain("D(x) needs x ≥ 1"));
    }
    Ok(
        differences(&SegmentedMertens::default(), CheckpointRecord::ORIGIN, &[x])?
            .samples
            .remove(0),
    )
}

/// Result of a batched difference pass: the samples plus every `(x, M(x))`
/// the pass computed (points and half-points), suitable for checkpointing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferencePass {
    pub samples: Vec<DifferenceSample>,
    pub records: Vec<CheckpointRecord>,
}

/// D at every point of an ascending list with one pass: the half-points
/// ⌊x/2⌋ are merged into the query list before streaming.
///
/// `known` supplies M values already on hand (for example a checkpoint file);
/// the pass resumes from the largest known record not above the smallest
/// still-missing query.
pub fn differences<S: MertensSource + ?Sized>(
    source: &S,
    start: CheckpointRecord,
    points: &[u64],
) -> Result<DifferencePass> {
    differences_with_known(source, &[start], points)
}

pub fn differences_with_known<S: MertensSource + ?Sized>(
    source: &S,
    known: &[CheckpointRecord],
    points: &[u64],
) -> Result<DifferencePass> {
    if points.first() == Some(&0) {
        return Err(Error::domain("D(x) needs x ≥ 1"));
    }
    if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::precondition(format!(
            "difference points must be strictly ascending ({} then {})",
            w[0], w[1]
        )));
    }
    let mut needed: Vec<u64> = points
        .iter()
        .flat_map(|&x| [x / 2, x])
        .filter(|&q| q > 0)
        .collect();
    needed.sort_unstable();
    needed.dedup();

    let mut table: std::collections::BTreeMap<u64, i64> = known
        .iter()
        .map(|r| (r.x, r.m_of_x))
        .chain(std::iter::once((0, 0)))
        .collect();
    let missing: Vec<u64> = needed
        .iter()
        .copied()
        .filter(|q| !table.contains_key(q))
        .collect();
    if let Some(&first_missing) = missing.first() {
        let (&sx, &sm) = table
            .range(..=first_missing)
            .next_back()
            .expect("origin is always known");
        for r in source.mertens_many_from(CheckpointRecord::new(sx, sm), &missing)? {
            table.insert(r.x, r.m_of_x);
        }
    }

    let records = needed
        .iter()
        .map(|&q| CheckpointRecord::new(q, table[&q]))
        .collect();
    let samples = points
        .iter()
        .map(|&x| DifferenceSample::new(x, table[&x], table[&(x / 2)]))
        .collect();
    Ok(DifferencePass { samples, records })
}
