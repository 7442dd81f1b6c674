//! Machine-readable experiment reports.
//!
//! A report is a flat list of rows, one per (sample point, observable):
//! the sample column holds a time for trace runs or the swept value for
//! sweep runs. Two output encodings are provided:
//!
//! * **CSV** — header `sample,observable,value,survival`, no metadata.
//!   Numbers are printed with 17 significant digits, which round-trips
//!   every finite `f64` exactly, so repeated runs of the same config in
//!   the same build produce byte-identical files.
//! * **JSON lines** — a metadata object on the first line (config digest,
//!   tool version, wall-clock duration — the duration is the only field
//!   anywhere that varies between identical runs), then one row object
//!   per line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Header of every CSV report.
pub const CSV_HEADER: &str = "sample,observable,value,survival";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ReportMetadata {
    /// SHA-256 of the canonical serialization of the parsed config.
    pub config_digest: String,
    pub tool_version: String,
    /// Wall-clock duration of the run in seconds.
    pub duration_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// Sample time (trace runs) or sweep value (sweep runs).
    pub sample: f64,
    /// Observable label, e.g. `concurrence(a1:a2)`. Never contains a comma.
    pub observable: String,
    pub value: f64,
    /// Survival probability accumulated up to this sample.
    pub survival: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
}

fn push_number(out: &mut String, value: f64) {
    use std::fmt::Write;
    write!(out, "{value:.16e}").expect("writing to a String cannot fail");
}

/// CSV encoding: header plus one line per row, newline-terminated.
/// Metadata is deliberately omitted so identical configs give identical
/// bytes across runs.
pub fn emit_csv(report: &ExperimentReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        debug_assert!(
            !row.observable.contains(',') && !row.observable.contains('\n'),
            "observable labels are generated without CSV delimiters"
        );
        push_number(&mut out, row.sample);
        out.push(',');
        out.push_str(&row.observable);
        out.push(',');
        push_number(&mut out, row.value);
        out.push(',');
        push_number(&mut out, row.survival);
        out.push('\n');
    }
    out
}

/// JSON-lines encoding: metadata object first, then one object per row.
pub fn emit_jsonl(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(
        &serde_json::to_string(&report.metadata).expect("metadata serialization cannot fail"),
    );
    out.push('\n');
    for row in &report.rows {
        out.push_str(&serde_json::to_string(row).expect("row serialization cannot fail"));
        out.push('\n');
    }
    out
}

/// Parses the output of [`emit_csv`] back into rows. Used for round-trip
/// checks and by downstream tests that inspect CLI output.
pub fn parse_csv_report(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => {
            return Err(Error::ConfigParse(format!(
                "expected CSV header {CSV_HEADER:?}, found {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (number, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::ConfigParse(format!(
                "CSV line {}: expected 4 fields, found {}",
                number + 2,
                fields.len()
            )));
        }
        let parse = |field: &str, name: &str| -> Result<f64> {
            field.parse::<f64>().map_err(|e| {
                Error::ConfigParse(format!("CSV line {}: bad {name}: {e}", number + 2))
            })
        };
        rows.push(ReportRow {
            sample: parse(fields[0], "sample")?,
            observable: fields[1].to_string(),
            value: parse(fields[2], "value")?,
            survival: parse(fields[3], "survival")?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report(rows: Vec<ReportRow>) -> ExperimentReport {
        ExperimentReport {
            metadata: ReportMetadata {
                config_digest: "0".repeat(64),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                duration_seconds: 0.25,
            },
            rows,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(emit_csv(&sample_report(Vec::new())), "sample,observable,value,survival\n");
    }

    #[test]
    fn csv_round_trips_doubles_exactly() {
        let rows = vec![
            ReportRow {
                sample: std::f64::consts::PI,
                observable: "concurrence(a1:a2)".to_string(),
                value: 2.0f64.sqrt() / 3.0,
                survival: 0.925_612_757_966_383_9,
            },
            ReportRow {
                sample: 1e-300,
                observable: "excitation(total)".to_string(),
                value: 4.0 / 3.0,
                survival: 1.0,
            },
        ];
        let emitted = emit_csv(&sample_report(rows.clone()));
        let parsed = parse_csv_report(&emitted).unwrap();
        assert_eq!(parsed, rows);
    }

    #[test]
    fn jsonl_leads_with_metadata() {
        let report = sample_report(vec![ReportRow {
            sample: 0.0,
            observable: "fidelity(target)".to_string(),
            value: 1.0,
            survival: 1.0,
        }]);
        let text = emit_jsonl(&report);
        let mut lines = text.lines();
        let meta = lines.next().unwrap();
        assert!(meta.contains("config-digest"));
        assert!(meta.contains("tool-version"));
        let row = lines.next().unwrap();
        assert!(row.contains("\"observable\":\"fidelity(target)\""));
        assert!(lines.next().is_none());
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(parse_csv_report("nope\n").is_err());
        assert!(parse_csv_report("sample,observable,value,survival\n1.0,x,2.0\n").is_err());
        assert!(parse_csv_report("sample,observable,value,survival\n1.0,x,2.0,abc\n").is_err());
    }
}
