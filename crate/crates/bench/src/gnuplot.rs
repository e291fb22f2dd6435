//! Gnuplot script generation for aggregate CSVs.
//!
//! The script reads the long-format aggregate file directly: each key is
//! selected by filtering on the second column, and drawn as mean with a
//! std error bar against the level on a log axis.

use std::path::Path;

/// One plot line per key, drawn from the aggregate CSV at `aggregate`.
pub fn render_script(aggregate: &Path, title: &str, keys: &[&str]) -> String {
    let data = aggregate.display();
    let mut out = String::new();
    out.push_str("set datafile separator \",\"\n");
    out.push_str(&format!("set title \"{title}\"\n"));
    out.push_str("set logscale x\n");
    out.push_str("set xlabel \"re level (px)\"\n");
    out.push_str("set ylabel \"mean +/- std\"\n");
    out.push_str("set key outside\n");
    let clauses: Vec<String> = keys
        .iter()
        .map(|key| {
            format!(
                "'{data}' using (strcol(2) eq \"{key}\" ? $1 : NaN):3:4 skip 1 \
                 with yerrorlines title \"{key}\""
            )
        })
        .collect();
    out.push_str("plot ");
    out.push_str(&clauses.join(", \\\n     "));
    out.push('\n');
    out
}

/// Keys produced by the success-rate aggregation.
pub const SUCCESS_KEYS: [&str; 4] = [
    "trials_gp",
    "trials_parametric",
    "success_gp",
    "success_parametric",
];

/// Keys produced by the criteria aggregation.
pub const CRITERIA_KEYS: [&str; 8] = [
    "ds", "d1", "dk", "te_ns", "ts_ns", "t1_ns", "tk_ns", "ik",
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    #[test]
    fn script_filters_each_key_from_the_aggregate() {
        let script = render_script(&PathBuf::from("agg.csv"), "criteria", &CRITERIA_KEYS);
        assert!(script.starts_with("set datafile separator \",\"\n"));
        assert!(script.contains("set logscale x"));
        for key in CRITERIA_KEYS {
            assert!(script.contains(&format!("strcol(2) eq \"{key}\"")));
        }
        assert_eq!(script.matches("yerrorlines").count(), CRITERIA_KEYS.len());
    }
}
