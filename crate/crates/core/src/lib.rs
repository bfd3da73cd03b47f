//! Möbius and Mertens machinery for probing a growth criterion built from
//! the floor-parity double sum
//!
//! ```text
//! S(n) = Σ_{j≤n} Σ_{k≤n} (⌊n²/jk⌋ − 2⌊n²/2jk⌋) μ(j) μ(k)
//! ```
//!
//! and the Mertens difference D(x) = M(x) − 2M(⌊x/2⌋), which are tied by the
//! exact identity `D(n²) = −S(n) − 2M(n)` for n ≥ 2.

pub mod checkpoint;
pub mod criterion;
pub mod doublesum;
pub mod emit;
pub mod error;
pub mod identities;
pub mod mertens;
pub mod moebius;
pub mod verify;

pub use checkpoint::{checkpoint_read, checkpoint_write};
pub use criterion::{
    growth_exponent, partial_sum_check, scan_difference, scan_double_sum, series_coefficient,
    ScanRecord, SeriesCoefficient,
};
pub use doublesum::{
    double_sum_blocked, double_sum_naive, main_identity_residual, DoubleSumResult, Method,
};
pub use error::{Error, MemoryBudget, Result};
pub use identities::{
    bracket, lemma3_sum, lemma4_sum, meissel_sum, nested_floor_check, BracketTerm,
};
pub use mertens::{
    difference, mertens_many, mertens_table, CheckpointRecord, DifferenceSample, MertensSource,
    MertensTable, SegmentedMertens,
};
pub use moebius::{
    mobius_single, sieve_full, sieve_segment, MoebiusBlock, MoebiusValue, PrimeTable,
};
