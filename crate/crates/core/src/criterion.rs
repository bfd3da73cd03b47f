//! Growth statistic `log|magnitude| / log n` and its running supremum, over
//! either the double sum S(n) or the difference D(x) = M(x) − 2M(⌊x/2⌋).
//!
//! D(x) is also the x-th partial sum of the coefficients of
//! `(1 − 2^{1−s}) Σ μ(k) k^{−s}`, which [`series_coefficient`] exposes.

use crate::doublesum::double_sum_blocked;
use crate::error::{Error, Result};
use crate::mertens::{
    differences_with_known, CheckpointRecord, MertensSource, MertensTable, SegmentedMertens,
};
use crate::moebius::{mobius_single, MoebiusBlock};

/// One row of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    /// `n` for double-sum scans, `x` for difference scans.
    pub n: u64,
    pub magnitude: i64,
    /// `None` when `magnitude = 0` or `n = 1`.
    pub exponent: Option<f64>,
    /// Max exponent so far; `None` until the first defined exponent.
    pub running_sup: Option<f64>,
}

/// `ln|magnitude| / ln n`, or `None` if either logarithm degenerates.
pub fn growth_exponent(magnitude: i64, n: u64) -> Option<f64> {
    if magnitude == 0 || n <= 1 {
        return None;
    }
    Some((magnitude.unsigned_abs() as f64).ln() / (n as f64).ln())
}

/// Builds scan records from `(n, magnitude)` pairs in the given order.
pub fn fold_running_sup(samples: impl IntoIterator<Item = (u64, i64)>) -> Vec<ScanRecord> {
    let mut sup: Option<f64> = None;
    samples
        .into_iter()
        .map(|(n, magnitude)| {
            let exponent = growth_exponent(magnitude, n);
            if let Some(e) = exponent {
                sup = Some(sup.map_or(e, |s| s.max(e)));
            }
            ScanRecord {
                n,
                magnitude,
                exponent,
                running_sup: sup,
            }
        })
        .collect()
}

/// S(n) for `n = n_min, n_min + stride, …, ≤ n_max` with the blocked method.
pub fn scan_double_sum(n_min: u64, n_max: u64, stride: u64) -> Result<Vec<ScanRecord>> {
    if n_min < 2 {
        return Err(Error::precondition(format!(
            "scan needs n_min ≥ 2, got {n_min}"
        )));
    }
    if n_min > n_max {
        return Err(Error::precondition(format!(
            "scan needs n_min ≤ n_max, got {n_min} > {n_max}"
        )));
    }
    if stride == 0 {
        return Err(Error::precondition("stride must be ≥ 1"));
    }
    let table = MertensTable::new(n_max)?;
    let ns: Vec<u64> = (n_min..=n_max).step_by(stride as usize).collect();
    let eval = |&n: &u64| double_sum_blocked(n, &table).map(|r| (n, r.s));
    #[cfg(feature = "parallel")]
    let values: Result<Vec<(u64, i64)>> = {
        use rayon::prelude::*;
        ns.par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Result<Vec<(u64, i64)>> = ns.iter().map(eval).collect();
    Ok(fold_running_sup(values?))
}

/// Output of a difference scan, with every Mertens value the pass touched.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceScan {
    pub records: Vec<ScanRecord>,
    pub checkpoints: Vec<CheckpointRecord>,
}

/// D(x) at each ascending point, in one streaming Mertens pass.
pub fn scan_difference(points: &[u64]) -> Result<Vec<ScanRecord>> {
    Ok(scan_difference_with(&SegmentedMertens::default(), &[], points)?.records)
}

/// Difference scan that may reuse already-known `(x, M(x))` pairs.
pub fn scan_difference_with<S: MertensSource + ?Sized>(
    source: &S,
    known: &[CheckpointRecord],
    points: &[u64],
) -> Result<DifferenceScan> {
    let pass = differences_with_known(source, known, points)?;
    let records = fold_running_sup(pass.samples.iter().map(|s| (s.x, s.d)));
    Ok(DifferenceScan {
        records,
        checkpoints: pass.records,
    })
}

/// `⌊10^{i/per_decade}⌋` for `i = 0, 1, …` up to `x_max`, deduplicated.
///
/// If more than `budget` points result, an evenly spaced subset (always
/// keeping the first and last) is returned.
pub fn geometric_grid(x_max: u64, per_decade: u32, budget: usize) -> Result<Vec<u64>> {
    if per_decade == 0 {
        return Err(Error::precondition("points per decade must be ≥ 1"));
    }
    if budget == 0 {
        return Err(Error::precondition("point budget must be ≥ 1"));
    }
    let mut grid = Vec::new();
    for i in 0u32.. {
        let x = if i % per_decade == 0 {
            match 10u64.checked_pow(i / per_decade) {
                Some(x) => x,
                None => break,
            }
        } else {
            let v = 10f64.powf(i as f64 / per_decade as f64).floor();
            if v >= u64::MAX as f64 {
                break;
            }
            v as u64
        };
        if x > x_max {
            break;
        }
        if grid.last() != Some(&x) {
            grid.push(x);
        }
    }
    if grid.len() > budget {
        let len = grid.len();
        grid = if budget == 1 {
            vec![grid[len - 1]]
        } else {
            let mut picked: Vec<u64> = (0..budget)
                .map(|i| grid[i * (len - 1) / (budget - 1)])
                .collect();
            picked.dedup();
            picked
        };
    }
    Ok(grid)
}

/// Coefficient of `m^{−s}` in `(1 − 2^{1−s}) Σ μ(k) k^{−s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesCoefficient {
    pub m: u64,
    pub c: i64,
}

/// `c(m) = μ(m) − 2·[2 | m]·μ(m/2)`.
pub fn series_coefficient(m: u64) -> Result<SeriesCoefficient> {
    let mu_m = mobius_single(m)?.get() as i64;
    let c = if m.is_multiple_of(2) {
        mu_m - 2 * mobius_single(m / 2)?.get() as i64
    } else {
        mu_m
    };
    Ok(SeriesCoefficient { m, c })
}

/// `c(1..=x)` read from a μ block that starts at 1.
pub fn series_coefficients(mu: &MoebiusBlock) -> Result<Vec<i64>> {
    if mu.lo() != 1 {
        return Err(Error::precondition("μ block must start at 1"));
    }
    let v = mu.values();
    Ok((1..=v.len())
        .map(|m| {
            let own = v[m - 1] as i64;
            if m % 2 == 0 {
                own - 2 * v[m / 2 - 1] as i64
            } else {
                own
            }
        })
        .collect())
}

/// Whether `Σ_{m≤x} c(m)` equals D(x).
pub fn partial_sum_check(x: u64) -> Result<bool> {
    if x == 0 {
        return Err(Error::domain("partial sums need x ≥ 1"));
    }
    let mu = crate::moebius::sieve_full(x)?;
    let partial: i64 = series_coefficients(&mu)?.iter().sum();
    Ok(partial == crate::mertens::difference(x)?.d)
}

/// First `x` covered by `mu` at which the coefficient partial sum differs from
/// `M(x) − 2M(⌊x/2⌋)` computed from `table`, as `(x, partial, d)`.
pub fn partial_sum_first_mismatch(
    mu: &MoebiusBlock,
    table: &MertensTable,
) -> Result<Option<(u64, i64, i64)>> {
    let coeffs = series_coefficients(mu)?;
    if table.n_max() < coeffs.len() as u64 {
        return Err(Error::precondition("Mertens table shorter than μ block"));
    }
    let mut partial = 0i64;
    for (i, c) in coeffs.iter().enumerate() {
        let x = i as u64 + 1;
        partial += c;
        let d = table.m(x) - 2 * table.m(x / 2);
        if partial != d {
            return Ok(Some((x, partial, d)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::sieve_full;

    #[test]
    fn exponent_examples() {
        let e = growth_exponent(2, 3).unwrap();
        assert!((e - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert!((e - 0.6309).abs() < 1e-4);
        assert_eq!(growth_exponent(0, 10), None);
        assert_eq!(growth_exponent(1, 7), Some(0.0));
        assert_eq!(growth_exponent(-1, 2), Some(0.0));
        assert_eq!(growth_exponent(5, 1), None);
    }

    #[test]
    fn double_sum_scan_examples() {
        let r = scan_double_sum(2, 3, 1).unwrap();
        assert_eq!(r.iter().map(|r| r.magnitude).collect::<Vec<_>>(), [1, 2]);
        assert_eq!(r[0].exponent, Some(0.0));
        assert_eq!(r[0].running_sup, Some(0.0));
        let e = 2f64.ln() / 3f64.ln();
        assert_eq!(r[1].exponent, Some(e));
        assert_eq!(r[1].running_sup, Some(e));

        let single = scan_double_sum(2, 2, 1).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].running_sup, Some(0.0));

        assert!(matches!(
            scan_double_sum(1, 3, 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            scan_double_sum(5, 3, 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            scan_double_sum(2, 3, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn stride_selects_progression() {
        let r = scan_double_sum(5, 30, 7).unwrap();
        assert_eq!(r.iter().map(|r| r.n).collect::<Vec<_>>(), [5, 12, 19, 26]);
    }

    #[test]
    fn difference_scan_examples() {
        let r = scan_difference(&[4]).unwrap();
        assert_eq!((r[0].magnitude, r[0].exponent), (-1, Some(0.0)));
        let r = scan_difference(&[10]).unwrap();
        assert_eq!(r[0].magnitude, 3);
        assert!((r[0].exponent.unwrap() - 0.4771).abs() < 1e-4);
        let r = scan_difference(&[1]).unwrap();
        assert_eq!(
            (r[0].magnitude, r[0].exponent, r[0].running_sup),
            (1, None, None)
        );
    }

    #[test]
    fn zero_magnitude_never_moves_sup() {
        let r = fold_running_sup([(1, 5), (10, 3), (20, 0), (30, 1)]);
        assert_eq!(r[0].running_sup, None);
        assert_eq!(r[2].exponent, None);
        assert_eq!(r[2].running_sup, r[1].running_sup);
        assert_eq!(r[3].running_sup, r[1].running_sup);
    }

    #[test]
    fn grid_is_geometric() {
        let g = geometric_grid(100, 12, 1000).unwrap();
        assert_eq!(
            g,
            [1, 2, 3, 4, 5, 6, 8, 10, 12, 14, 17, 21, 26, 31, 38, 46, 56, 68, 82, 100]
        );
        let g = geometric_grid(100_000_000, 12, 1000).unwrap();
        assert_eq!(*g.last().unwrap(), 100_000_000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let thin = geometric_grid(100_000_000, 12, 10).unwrap();
        assert_eq!(thin.len(), 10);
        assert_eq!((thin[0], thin[9]), (1, 100_000_000));
        assert!(geometric_grid(10, 0, 5).is_err());
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(series_coefficient(1).unwrap().c, 1);
        assert_eq!(series_coefficient(2).unwrap().c, -3);
        assert_eq!(series_coefficient(6).unwrap().c, 3);
        assert_eq!(series_coefficient(3).unwrap().c, -1);
        assert_eq!(series_coefficient(4).unwrap().c, 2);
        assert!(series_coefficient(0).is_err());
        let block = sieve_full(200).unwrap();
        let bulk = series_coefficients(&block).unwrap();
        for m in 1..=200u64 {
            assert_eq!(bulk[m as usize - 1], series_coefficient(m).unwrap().c);
        }
    }

    #[test]
    fn partial_sums_match_difference() {
        assert!(partial_sum_check(4).unwrap());
        assert!(partial_sum_check(1).unwrap());
        assert!(partial_sum_check(997).unwrap());
        let mu = sieve_full(20_000).unwrap();
        let table = MertensTable::from_block(&mu).unwrap();
        assert_eq!(partial_sum_first_mismatch(&mu, &table).unwrap(), None);
    }
}
