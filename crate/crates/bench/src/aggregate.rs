//! Per-level summary statistics over record streams.

use std::collections::BTreeMap;

use crate::error::{BenchError, Result};
use crate::experiments::{MeasurementRecord, SuccessRateRecord, Variant};

/// Mean and sample standard deviation of one metric at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub re_level: f64,
    pub key: String,
    pub mean: f64,
    pub std: f64,
    pub n: u64,
}

/// Mean and sample (n - 1) standard deviation. A single observation has
/// zero deviation by convention; an empty group is a caller bug.
pub fn mean_std(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(BenchError::EmptyGroup);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Ok((mean, 0.0));
    }
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    Ok((mean, (ss / (n - 1.0)).sqrt()))
}

/// Groups positive finite levels in numeric order. The bit pattern of a
/// positive f64 sorts the same way as its value, which lets the map key stay
/// hashable and totally ordered.
fn level_bits(level: f64) -> u64 {
    level.to_bits()
}

fn rows_from_groups(groups: BTreeMap<(u64, &'static str), Vec<f64>>) -> Result<Vec<AggregateRow>> {
    let mut rows = Vec::with_capacity(groups.len());
    for ((bits, key), values) in groups {
        let (mean, std) = mean_std(&values)?;
        rows.push(AggregateRow {
            re_level: f64::from_bits(bits),
            key: key.to_string(),
            mean,
            std,
            n: values.len() as u64,
        });
    }
    Ok(rows)
}

/// Per (level, variant) mean/std of the trial count and of the success
/// indicator (so the mean is the success rate).
pub fn aggregate_success(records: &[SuccessRateRecord]) -> Result<Vec<AggregateRow>> {
    let mut groups: BTreeMap<(u64, &'static str), Vec<f64>> = BTreeMap::new();
    for r in records {
        let (trials_key, success_key) = match r.variant {
            Variant::Gp => ("trials_gp", "success_gp"),
            Variant::Parametric => ("trials_parametric", "success_parametric"),
        };
        groups
            .entry((level_bits(r.re_level), trials_key))
            .or_default()
            .push(r.trials as f64);
        groups
            .entry((level_bits(r.re_level), success_key))
            .or_default()
            .push(if r.succeeded { 1.0 } else { 0.0 });
    }
    rows_from_groups(groups)
}

/// Per-level mean/std of each bias, each timing, and the iteration count.
pub fn aggregate_criteria(records: &[MeasurementRecord]) -> Result<Vec<AggregateRow>> {
    let mut groups: BTreeMap<(u64, &'static str), Vec<f64>> = BTreeMap::new();
    for r in records {
        let bits = level_bits(r.re_level);
        let metrics: [(&'static str, f64); 8] = [
            ("ds", r.ds),
            ("d1", r.d1),
            ("dk", r.dk),
            ("te_ns", r.te_ns as f64),
            ("ts_ns", r.ts_ns as f64),
            ("t1_ns", r.t1_ns as f64),
            ("tk_ns", r.tk_ns as f64),
            ("ik", r.ik as f64),
        ];
        for (key, value) in metrics {
            groups.entry((bits, key)).or_default().push(value);
        }
    }
    rows_from_groups(groups)
}
