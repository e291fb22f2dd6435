//! CSV serialization for the record and aggregate streams.
//!
//! The schemas are fixed: one header line, comma separators, no quoting
//! (no field ever contains a comma). Floats are written with 17 significant
//! digits so parsing them back yields bit-identical values.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::aggregate::AggregateRow;
use crate::error::{BenchError, Result};
use crate::experiments::{MeasurementRecord, SuccessRateRecord, Variant};

pub const SUCCESS_HEADER: &str = "re_level,variant,rep,trials,succeeded";
pub const MEASUREMENT_HEADER: &str =
    "re_level,rep,re_sq,sed_sq,re1_sq,rek_sq,ds,d1,dk,te_ns,ts_ns,t1_ns,tk_ns,ik";
pub const AGGREGATE_HEADER: &str = "re_level,key,mean,std,n";

/// 17 significant digits: enough to round-trip any finite f64 exactly.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_float(field: &str, name: &str, line: usize) -> Result<f64> {
    f64::from_str(field).map_err(|_| BenchError::SchemaMismatch {
        line,
        reason: format!("field {name} is not a float: {field:?}"),
    })
}

fn parse_u64(field: &str, name: &str, line: usize) -> Result<u64> {
    u64::from_str(field).map_err(|_| BenchError::SchemaMismatch {
        line,
        reason: format!("field {name} is not an unsigned integer: {field:?}"),
    })
}

fn parse_bool(field: &str, name: &str, line: usize) -> Result<bool> {
    match field {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(BenchError::SchemaMismatch {
            line,
            reason: format!("field {name} is not true/false: {field:?}"),
        }),
    }
}

fn split_row<'a>(row: &'a str, expected: usize, line: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = row.split(',').collect();
    if fields.len() != expected {
        return Err(BenchError::SchemaMismatch {
            line,
            reason: format!("expected {expected} fields, found {}", fields.len()),
        });
    }
    Ok(fields)
}

/// Header plus body lines; `header` is line 1 of the file.
fn check_header<'a>(text: &'a str, header: &str) -> Result<Vec<&'a str>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(first) if first == header => {}
        Some(first) => {
            return Err(BenchError::SchemaMismatch {
                line: 1,
                reason: format!("expected header {header:?}, found {first:?}"),
            })
        }
        None => {
            return Err(BenchError::SchemaMismatch {
                line: 1,
                reason: "empty input".to_string(),
            })
        }
    }
    Ok(lines.collect())
}

pub fn render_success(records: &[SuccessRateRecord]) -> String {
    let mut out = String::from(SUCCESS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(r.re_level),
            r.variant,
            r.rep,
            r.trials,
            r.succeeded
        ));
    }
    out
}

pub fn parse_success(text: &str) -> Result<Vec<SuccessRateRecord>> {
    let body = check_header(text, SUCCESS_HEADER)?;
    let mut records = Vec::with_capacity(body.len());
    for (i, row) in body.iter().enumerate() {
        let line = i + 2;
        let f = split_row(row, 5, line)?;
        let variant = Variant::from_str(f[1])
            .map_err(|reason| BenchError::SchemaMismatch { line, reason })?;
        records.push(SuccessRateRecord {
            re_level: parse_float(f[0], "re_level", line)?,
            variant,
            rep: parse_u64(f[2], "rep", line)?,
            trials: parse_u64(f[3], "trials", line)?,
            succeeded: parse_bool(f[4], "succeeded", line)?,
        });
    }
    Ok(records)
}

pub fn render_measurements(records: &[MeasurementRecord]) -> String {
    let mut out = String::from(MEASUREMENT_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_float(r.re_level),
            r.rep,
            fmt_float(r.re_sq),
            fmt_float(r.sed_sq),
            fmt_float(r.re1_sq),
            fmt_float(r.rek_sq),
            fmt_float(r.ds),
            fmt_float(r.d1),
            fmt_float(r.dk),
            r.te_ns,
            r.ts_ns,
            r.t1_ns,
            r.tk_ns,
            r.ik
        ));
    }
    out
}

pub fn parse_measurements(text: &str) -> Result<Vec<MeasurementRecord>> {
    let body = check_header(text, MEASUREMENT_HEADER)?;
    let mut records = Vec::with_capacity(body.len());
    for (i, row) in body.iter().enumerate() {
        let line = i + 2;
        let f = split_row(row, 14, line)?;
        records.push(MeasurementRecord {
            re_level: parse_float(f[0], "re_level", line)?,
            rep: parse_u64(f[1], "rep", line)?,
            re_sq: parse_float(f[2], "re_sq", line)?,
            sed_sq: parse_float(f[3], "sed_sq", line)?,
            re1_sq: parse_float(f[4], "re1_sq", line)?,
            rek_sq: parse_float(f[5], "rek_sq", line)?,
            ds: parse_float(f[6], "ds", line)?,
            d1: parse_float(f[7], "d1", line)?,
            dk: parse_float(f[8], "dk", line)?,
            te_ns: parse_u64(f[9], "te_ns", line)?,
            ts_ns: parse_u64(f[10], "ts_ns", line)?,
            t1_ns: parse_u64(f[11], "t1_ns", line)?,
            tk_ns: parse_u64(f[12], "tk_ns", line)?,
            ik: parse_u64(f[13], "ik", line)?,
        });
    }
    Ok(records)
}

pub fn render_aggregate(rows: &[AggregateRow]) -> String {
    let mut out = String::from(AGGREGATE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(r.re_level),
            r.key,
            fmt_float(r.mean),
            fmt_float(r.std),
            r.n
        ));
    }
    out
}

pub fn parse_aggregate(text: &str) -> Result<Vec<AggregateRow>> {
    let body = check_header(text, AGGREGATE_HEADER)?;
    let mut rows = Vec::with_capacity(body.len());
    for (i, row) in body.iter().enumerate() {
        let line = i + 2;
        let f = split_row(row, 5, line)?;
        rows.push(AggregateRow {
            re_level: parse_float(f[0], "re_level", line)?,
            key: f[1].to_string(),
            mean: parse_float(f[2], "mean", line)?,
            std: parse_float(f[3], "std", line)?,
            n: parse_u64(f[4], "n", line)?,
        });
    }
    Ok(rows)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_success(path: &Path, records: &[SuccessRateRecord]) -> Result<()> {
    write_text(path, &render_success(records))
}

pub fn read_success(path: &Path) -> Result<Vec<SuccessRateRecord>> {
    parse_success(&read_text(path)?)
}

pub fn write_measurements(path: &Path, records: &[MeasurementRecord]) -> Result<()> {
    write_text(path, &render_measurements(records))
}

pub fn read_measurements(path: &Path) -> Result<Vec<MeasurementRecord>> {
    parse_measurements(&read_text(path)?)
}

pub fn write_aggregate(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    write_text(path, &render_aggregate(rows))
}

pub fn read_aggregate(path: &Path) -> Result<Vec<AggregateRow>> {
    parse_aggregate(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_measurement() -> MeasurementRecord {
        MeasurementRecord {
            re_level: 1e-3,
            rep: 4,
            re_sq: 9.999_999_999_999_123e-7,
            sed_sq: 2.000_000_4e-6,
            re1_sq: 1.000_000_1e-6,
            rek_sq: 1.000_000_000_3e-6,
            ds: 0.000_02,
            d1: 0.01,
            dk: 0.000_000_03,
            te_ns: 1034,
            ts_ns: 91,
            t1_ns: 87,
            tk_ns: 214,
            ik: 3,
        }
    }

    #[test]
    fn measurements_round_trip_bit_exactly() {
        let records = vec![sample_measurement()];
        let parsed = parse_measurements(&render_measurements(&records)).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn success_round_trips_bit_exactly() {
        let records = vec![
            SuccessRateRecord {
                re_level: 1e6,
                variant: Variant::Gp,
                rep: 0,
                trials: 200,
                succeeded: false,
            },
            SuccessRateRecord {
                re_level: 1e6,
                variant: Variant::Parametric,
                rep: 0,
                trials: 1,
                succeeded: true,
            },
        ];
        let parsed = parse_success(&render_success(&records)).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn empty_streams_render_as_header_only() {
        assert_eq!(render_success(&[]), format!("{SUCCESS_HEADER}\n"));
        assert_eq!(render_measurements(&[]), format!("{MEASUREMENT_HEADER}\n"));
        assert_eq!(render_aggregate(&[]), format!("{AGGREGATE_HEADER}\n"));
        assert!(parse_success(&render_success(&[])).unwrap().is_empty());
    }

    #[test]
    fn wrong_header_reports_line_one() {
        let err = parse_success("re_level,rep\n").unwrap_err();
        match err {
            BenchError::SchemaMismatch { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn malformed_row_reports_its_line_number() {
        let text = format!("{SUCCESS_HEADER}\n1.0e0,gp,0,1,true\n1.0e0,gp,0,nope,true\n");
        let err = parse_success(&text).unwrap_err();
        match err {
            BenchError::SchemaMismatch { line, reason } => {
                assert_eq!(line, 3);
                assert!(reason.contains("trials"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn aggregate_round_trips() {
        let rows = vec![AggregateRow {
            re_level: 100.0,
            key: "ds".to_string(),
            mean: 37.5,
            std: 12.25,
            n: 1000,
        }];
        let parsed = parse_aggregate(&render_aggregate(&rows)).unwrap();
        assert_eq!(parsed, rows);
    }
}
