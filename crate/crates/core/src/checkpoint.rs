//! Checkpoint files: one `x<TAB>M(x)` line per record, ASCII decimal,
//! ascending `x`, `\n` endings, no header.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::mertens::CheckpointRecord;

fn check_ascending(records: &[CheckpointRecord]) -> Result<()> {
    if let Some(w) = records.windows(2).find(|w| w[0].x >= w[1].x) {
        return Err(Error::precondition(format!(
            "checkpoint records must be strictly ascending in x ({} then {})",
            w[0].x, w[1].x
        )));
    }
    Ok(())
}

fn check_record(r: &CheckpointRecord) -> Result<()> {
    if r.m_of_x.unsigned_abs() > r.x {
        return Err(Error::precondition(format!(
            "|M(x)| ≤ x violated by record ({}, {})",
            r.x, r.m_of_x
        )));
    }
    Ok(())
}

pub fn format_checkpoint(records: &[CheckpointRecord]) -> Result<String> {
    check_ascending(records)?;
    let mut out = String::with_capacity(records.len() * 16);
    for r in records {
        check_record(r)?;
        out.push_str(&format!("{}\t{}\n", r.x, r.m_of_x));
    }
    Ok(out)
}

pub fn parse_checkpoint(text: &str) -> Result<Vec<CheckpointRecord>> {
    let mut records: Vec<CheckpointRecord> = Vec::new();
    // a trailing "\n" terminates the last record rather than opening an empty one
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Ok(records);
    }
    for (i, line) in body.split('\n').enumerate() {
        let line_no = i + 1;
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let (x, m) = line
            .split_once('\t')
            .ok_or_else(|| parse_err(format!("expected `x<TAB>M(x)`, got {line:?}")))?;
        let x: u64 = parse_decimal(x).ok_or_else(|| parse_err(format!("bad x field {x:?}")))?;
        let m: i64 = parse_decimal(m).ok_or_else(|| parse_err(format!("bad M(x) field {m:?}")))?;
        let record = CheckpointRecord::new(x, m);
        check_record(&record).map_err(|e| parse_err(e.to_string()))?;
        if let Some(prev) = records.last() {
            if prev.x >= x {
                return Err(Error::precondition(format!(
                    "checkpoint line {line_no}: x = {x} does not exceed previous x = {}",
                    prev.x
                )));
            }
        }
        records.push(record);
    }
    Ok(records)
}

/// Strict ASCII decimal: optional leading `-`, digits only, no `+`, no spaces.
fn parse_decimal<T: std::str::FromStr>(field: &str) -> Option<T> {
    let digits = field.strip_prefix('-').unwrap_or(field);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    field.parse().ok()
}

pub fn checkpoint_write(records: &[CheckpointRecord], path: impl AsRef<Path>) -> Result<()> {
    let text = format_checkpoint(records)?;
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn checkpoint_read(path: impl AsRef<Path>) -> Result<Vec<CheckpointRecord>> {
    parse_checkpoint(&fs::read_to_string(path)?)
}

/// Largest record with `x ≤ target`, the natural place to resume a scan.
pub fn resume_point(records: &[CheckpointRecord], target: u64) -> CheckpointRecord {
    let idx = records.partition_point(|r| r.x <= target);
    if idx == 0 {
        CheckpointRecord::ORIGIN
    } else {
        records[idx - 1]
    }
}

/// Merges two ascending record lists; on equal `x` the values must agree.
pub fn merge(a: &[CheckpointRecord], b: &[CheckpointRecord]) -> Result<Vec<CheckpointRecord>> {
    check_ascending(a)?;
    check_ascending(b)?;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ra, rb) = (a[i], b[j]);
        match ra.x.cmp(&rb.x) {
            std::cmp::Ordering::Less => {
                out.push(ra);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(rb);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                if ra.m_of_x != rb.m_of_x {
                    return Err(Error::precondition(format!(
                        "conflicting checkpoints at x = {}: {} vs {}",
                        ra.x, ra.m_of_x, rb.m_of_x
                    )));
                }
                out.push(ra);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn format_is_tab_separated() {
        let text =
            format_checkpoint(&[CheckpointRecord::new(10, -1), CheckpointRecord::new(100, 1)])
                .unwrap();
        assert_eq!(text, "10\t-1\n100\t1\n");
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.tsv");
        let records = [CheckpointRecord::new(10, -1)];
        checkpoint_write(&records, &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "10\t-1\n");
        assert_eq!(checkpoint_read(&path).unwrap(), records);
    }

    #[test]
    fn empty_file_is_empty_list() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.tsv");
        fs::write(&path, "").unwrap();
        assert!(checkpoint_read(&path).unwrap().is_empty());
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            checkpoint_read("/nonexistent/ck.tsv"),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn malformed_lines_report_line_number() {
        for (text, line) in [
            ("10\t-1\nabc\n", 2),
            ("10 -1\n", 1),
            ("10\t-1 \n", 1),
            ("10\t+1\n", 1),
            ("1\t1\n2\t0\n\n", 3),
            ("5\t9\n", 1),
        ] {
            match parse_checkpoint(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn descending_x_is_precondition_error() {
        assert!(matches!(
            parse_checkpoint("10\t-1\n5\t-2\n"),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            format_checkpoint(&[CheckpointRecord::new(10, -1), CheckpointRecord::new(5, -2)]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn resume_point_picks_largest_not_above() {
        let r = [CheckpointRecord::new(10, -1), CheckpointRecord::new(100, 1)];
        assert_eq!(resume_point(&r, 5), CheckpointRecord::ORIGIN);
        assert_eq!(resume_point(&r, 10), r[0]);
        assert_eq!(resume_point(&r, 99), r[0]);
        assert_eq!(resume_point(&r, 1_000), r[1]);
    }

    #[test]
    fn merge_detects_conflicts() {
        let a = [CheckpointRecord::new(1, 1), CheckpointRecord::new(10, -1)];
        let b = [CheckpointRecord::new(2, 0), CheckpointRecord::new(10, -1)];
        assert_eq!(merge(&a, &b).unwrap().len(), 3);
        assert!(merge(&a, &[CheckpointRecord::new(10, 0)]).is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(mut pairs in proptest::collection::vec((1u64..u64::MAX, any::<i64>()), 0..40)) {
            pairs.sort_by_key(|p| p.0);
            pairs.dedup_by_key(|p| p.0);
            let records: Vec<_> = pairs
                .into_iter()
                .map(|(x, m)| CheckpointRecord::new(x, m.clamp(-(x.min(i64::MAX as u64) as i64), x.min(i64::MAX as u64) as i64)))
                .collect();
            let text = format_checkpoint(&records).unwrap();
            prop_assert_eq!(parse_checkpoint(&text).unwrap(), records);
        }
    }
}
