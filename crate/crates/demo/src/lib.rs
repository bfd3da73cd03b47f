//! Browser bindings for the static demo page in `www/`.
//!
//! Views: the difference scan D(x) with its growth exponent, the double-sum
//! scan S(n), the signed bracket grid for a chosen m, and the Mertens walk.
//! Each binding is a thin wrapper over a plain Rust function so the logic can be
//! tested off-wasm.

use mertens_core::criterion::{geometric_grid, scan_difference, scan_double_sum};
use mertens_core::emit::emit_json;
use mertens_core::identities::bracket;
use mertens_core::mertens::MertensTable;
use mertens_core::moebius::sieve_full;
use wasm_bindgen::prelude::*;

/// Largest x the page will stream in one call.
pub const MAX_X: u64 = 100_000_000;
/// Largest n for the double-sum view.
pub const MAX_N: u64 = 20_000;
/// Largest side of the bracket grid.
pub const MAX_GRID: u32 = 512;

fn to_u64(v: f64, what: &str) -> Result<u64, String> {
    if !v.is_finite() || v < 1.0 || v.fract() != 0.0 || v > 9.0e15 {
        return Err(format!("{what} must be a positive integer, got {v}"));
    }
    Ok(v as u64)
}

/// JSON scan records of D(x) on the geometric grid up to `x_max`.
pub fn difference_scan_json(x_max: f64, per_decade: u32) -> Result<String, String> {
    let x_max = to_u64(x_max, "x_max")?;
    if x_max > MAX_X {
        return Err(format!("x_max is capped at {MAX_X} in the browser"));
    }
    let grid = geometric_grid(x_max, per_decade, 5_000).map_err(|e| e.to_string())?;
    let records = scan_difference(&grid).map_err(|e| e.to_string())?;
    Ok(emit_json(&records))
}

/// JSON scan records of S(n) for `n_min ≤ n ≤ n_max` in steps of `stride`.
pub fn double_sum_scan_json(n_min: f64, n_max: f64, stride: f64) -> Result<String, String> {
    let (n_min, n_max, stride) = (
        to_u64(n_min, "n_min")?,
        to_u64(n_max, "n_max")?,
        to_u64(stride, "stride")?,
    );
    if n_max > MAX_N {
        return Err(format!("n_max is capped at {MAX_N} in the browser"));
    }
    let records = scan_double_sum(n_min, n_max, stride).map_err(|e| e.to_string())?;
    Ok(emit_json(&records))
}

/// Row-major `size × size` grid of `bracket(m, j, k)` for `j, k = 1..=size`,
/// with the sign of μ(j)μ(k) folded in: 0 for a zero term, 1 for +1, 2 for −1.
pub fn bracket_grid_cells(m: f64, size: u32) -> Result<Vec<u8>, String> {
    let m = to_u64(m, "m")?;
    if size == 0 || size > MAX_GRID {
        return Err(format!("grid size must be in 1..={MAX_GRID}"));
    }
    let mu = sieve_full(size as u64).map_err(|e| e.to_string())?;
    let mu = mu.values();
    let mut cells = Vec::with_capacity((size * size) as usize);
    for j in 1..=size as u64 {
        for k in 1..=size as u64 {
            let b = bracket(m, j, k).map_err(|e| e.to_string())?.value as i8;
            let term = b * mu[j as usize - 1] * mu[k as usize - 1];
            cells.push(match term {
                0 => 0,
                1 => 1,
                _ => 2,
            });
        }
    }
    Ok(cells)
}

/// M(x) for `x = 1..=x_max`, downsampled to at most `samples` (min, max)
/// pairs per bucket so the page can draw the full walk.
pub fn mertens_envelope(x_max: f64, samples: u32) -> Result<Vec<f64>, String> {
    let x_max = to_u64(x_max, "x_max")?;
    if x_max > 10_000_000 {
        return Err("x_max is capped at 10000000 for the walk view".into());
    }
    let samples = samples.clamp(1, 4096) as u64;
    let table = MertensTable::new(x_max).map_err(|e| e.to_string())?;
    let prefix = &table.prefix()[1..];
    let bucket = x_max.div_ceil(samples) as usize;
    let mut out = Vec::with_capacity(2 * samples as usize);
    for chunk in prefix.chunks(bucket) {
        let lo = *chunk.iter().min().expect("non-empty chunk");
        let hi = *chunk.iter().max().expect("non-empty chunk");
        out.push(lo as f64);
        out.push(hi as f64);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = differenceScan)]
pub fn difference_scan(x_max: f64, per_decade: u32) -> Result<String, JsError> {
    difference_scan_json(x_max, per_decade).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = doubleSumScan)]
pub fn double_sum_scan(n_min: f64, n_max: f64, stride: f64) -> Result<String, JsError> {
    double_sum_scan_json(n_min, n_max, stride).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = bracketGrid)]
pub fn bracket_grid(m: f64, size: u32) -> Result<Vec<u8>, JsError> {
    bracket_grid_cells(m, size).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = mertensEnvelope)]
pub fn mertens_walk(x_max: f64, samples: u32) -> Result<Vec<f64>, JsError> {
    mertens_envelope(x_max, samples).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_scan_small() {
        let json = difference_scan_json(10.0, 12).unwrap();
        assert!(json.starts_with("[\n{\"n\":1,\"magnitude\":1,\"exponent\":null"));
        assert!(json.contains("{\"n\":10,\"magnitude\":3,\"exponent\":0.477121"));
        assert!(difference_scan_json(0.0, 12).is_err());
        assert!(difference_scan_json(1.5, 12).is_err());
        assert!(difference_scan_json(1e9, 12).is_err());
    }

    #[test]
    fn double_sum_scan_small() {
        let json = double_sum_scan_json(2.0, 3.0, 1.0).unwrap();
        assert_eq!(
            json,
            "[\n{\"n\":2,\"magnitude\":1,\"exponent\":0.000000,\"running_sup\":0.000000},\n\
             {\"n\":3,\"magnitude\":2,\"exponent\":0.630930,\"running_sup\":0.630930}\n]"
        );
        assert!(double_sum_scan_json(1.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn bracket_grid_sums_to_double_sum() {
        // summing the signed cells of the n×n grid at m = n² gives S(n)
        for (n, s) in [(2u32, 1i64), (3, 2)] {
            let cells = bracket_grid_cells((n * n) as f64, n).unwrap();
            let total: i64 = cells
                .iter()
                .map(|&c| match c {
                    1 => 1,
                    2 => -1,
                    _ => 0,
                })
                .sum();
            assert_eq!(total, s);
        }
        assert!(bracket_grid_cells(4.0, 0).is_err());
    }

    #[test]
    fn envelope_brackets_the_walk() {
        let env = mertens_envelope(10.0, 10).unwrap();
        assert_eq!(
            env,
            [
                1., 1., 0., 0., -1., -1., -1., -1., -2., -2., -1., -1., -2., -2., -2., -2., -2.,
                -2., -1., -1.
            ]
        );
        let env = mertens_envelope(10.0, 2).unwrap();
        assert_eq!(env, [-2., 1., -2., -1.]);
    }
}
