//! CSV and JSON rendering of homogeneous record lists.
//!
//! Both formats are byte-for-byte deterministic: integers in plain decimal,
//! reals fixed at six decimals (round half to even on exact ties), missing
//! values as an empty CSV field or JSON `null`.

use std::fmt::Write;

use crate::criterion::ScanRecord;
use crate::doublesum::{DoubleSumResult, ResidualSample};
use crate::mertens::CheckpointRecord;

/// A single output cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Field<'a> {
    Unsigned(u64),
    Signed(i64),
    Real(Option<f64>),
    Text(&'a str),
}

/// A row type with a fixed column set.
pub trait Record {
    const COLUMNS: &'static [&'static str];

    fn fields(&self) -> Vec<Field<'_>>;
}

/// Fixed six-decimal rendering used everywhere a real is printed.
pub fn format_real(v: f64) -> String {
    let s = format!("{v:.6}");
    // "-0.000000" and "0.000000" must not differ
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn write_field(out: &mut String, field: &Field<'_>, json: bool) {
    match *field {
        Field::Unsigned(v) => write!(out, "{v}").unwrap(),
        Field::Signed(v) => write!(out, "{v}").unwrap(),
        Field::Real(Some(v)) if v.is_finite() => out.push_str(&format_real(v)),
        Field::Real(_) => {
            if json {
                out.push_str("null");
            }
        }
        Field::Text(t) => {
            if json {
                out.push('"');
                for c in t.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        c if (c as u32) < 0x20 => write!(out, "\\u{:04x}", c as u32).unwrap(),
                        c => out.push(c),
                    }
                }
                out.push('"');
            } else {
                out.push_str(t);
            }
        }
    }
}

/// Header row then one row per record, comma separated, `\n` terminated.
pub fn emit_csv<R: Record>(records: &[R]) -> String {
    let mut out = R::COLUMNS.join(",");
    out.push('\n');
    for r in records {
        for (i, f) in r.fields().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_field(&mut out, f, false);
        }
        out.push('\n');
    }
    out
}

/// A JSON array of objects keyed by the column names, one object per line.
pub fn emit_json<R: Record>(records: &[R]) -> String {
    if records.is_empty() {
        return "[]".to_string();
    }
    let mut out = String::from("[\n");
    for (n, r) in records.iter().enumerate() {
        out.push('{');
        for (i, (name, f)) in R::COLUMNS.iter().zip(r.fields()).enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "\"{name}\":").unwrap();
            write_field(&mut out, &f, true);
        }
        out.push('}');
        if n + 1 < records.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push(']');
    out
}

impl Record for ScanRecord {
    const COLUMNS: &'static [&'static str] = &["n", "magnitude", "exponent", "running_sup"];

    fn fields(&self) -> Vec<Field<'_>> {
        vec![
            Field::Unsigned(self.n),
            Field::Signed(self.magnitude),
            Field::Real(self.exponent),
            Field::Real(self.running_sup),
        ]
    }
}

impl Record for CheckpointRecord {
    const COLUMNS: &'static [&'static str] = &["x", "m"];

    fn fields(&self) -> Vec<Field<'_>> {
        vec![Field::Unsigned(self.x), Field::Signed(self.m_of_x)]
    }
}

impl Record for DoubleSumResult {
    const COLUMNS: &'static [&'static str] = &["n", "s", "method"];

    fn fields(&self) -> Vec<Field<'_>> {
        vec![
            Field::Unsigned(self.n),
            Field::Signed(self.s),
            Field::Text(self.method.as_str()),
        ]
    }
}

impl Record for ResidualSample {
    const COLUMNS: &'static [&'static str] =
        &["n", "s", "m_n", "m_square", "m_half_square", "residual"];

    fn fields(&self) -> Vec<Field<'_>> {
        vec![
            Field::Unsigned(self.n),
            Field::Signed(self.s),
            Field::Signed(self.m_n),
            Field::Signed(self.m_square),
            Field::Signed(self.m_half_square),
            Field::Signed(self.residual),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: u64, magnitude: i64, e: Option<f64>, sup: Option<f64>) -> ScanRecord {
        ScanRecord {
            n,
            magnitude,
            exponent: e,
            running_sup: sup,
        }
    }

    #[test]
    fn csv_single_row() {
        let e = 2f64.ln() / 3f64.ln();
        assert_eq!(
            emit_csv(&[rec(3, 2, Some(e), Some(e))]),
            "n,magnitude,exponent,running_sup\n3,2,0.630930,0.630930\n"
        );
    }

    #[test]
    fn empty_lists() {
        assert_eq!(
            emit_csv::<ScanRecord>(&[]),
            "n,magnitude,exponent,running_sup\n"
        );
        assert_eq!(emit_json::<ScanRecord>(&[]), "[]");
    }

    #[test]
    fn nulls() {
        let r = [rec(1, 1, None, None)];
        assert_eq!(emit_csv(&r), "n,magnitude,exponent,running_sup\n1,1,,\n");
        assert_eq!(
            emit_json(&r),
            "[\n{\"n\":1,\"magnitude\":1,\"exponent\":null,\"running_sup\":null}\n]"
        );
    }

    #[test]
    fn json_rows() {
        let r = [
            rec(4, -1, Some(0.0), Some(0.0)),
            rec(10, 3, Some(0.4771212547), Some(0.4771212547)),
        ];
        assert_eq!(
            emit_json(&r),
            "[\n{\"n\":4,\"magnitude\":-1,\"exponent\":0.000000,\"running_sup\":0.000000},\n\
             {\"n\":10,\"magnitude\":3,\"exponent\":0.477121,\"running_sup\":0.477121}\n]"
        );
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.0), "0.000000");
        assert_eq!(format_real(-0.0), "0.000000");
        assert_eq!(format_real(-1e-9), "0.000000");
        assert_eq!(format_real(0.5), "0.500000");
        // 2^-7 = 0.0078125 exactly: ties go to even
        assert_eq!(format_real(0.0078125), "0.007812");
        assert_eq!(format_real(0.0234375), "0.023438");
    }

    #[test]
    fn other_records() {
        assert_eq!(emit_csv(&[CheckpointRecord::new(10, -1)]), "x,m\n10,-1\n");
    }
}
