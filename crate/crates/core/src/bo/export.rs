//! Versioned JSON and CSV trace files.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::regret::{cumulative_gain, error_sequence};
use super::run::{BoTrace, TRACE_SCHEMA};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const CSV_COLUMNS: [&str; 9] = [
    "t", "y_t", "best_y", "f_exact", "best_f", "r_t", "eta_t", "sigma_t", "gain_so_far",
];

pub fn trace_to_json<T: Scalar + Serialize>(trace: &BoTrace<T>) -> Result<String> {
    serde_json::to_string_pretty(trace).map_err(|e| Error::Numerical(format!("trace serialization: {e}")))
}

pub fn trace_from_json<T: Scalar + DeserializeOwned>(text: &str) -> Result<BoTrace<T>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e))?;
    match v.get("schema").and_then(|s| s.as_u64()) {
        Some(s) if s == TRACE_SCHEMA as u64 => {}
        other => {
            return Err(Error::Parse {
                line: 1,
                reason: format!("unsupported trace schema {other:?}"),
            })
        }
    }
    serde_json::from_value(v).map_err(|e| parse_err(0, e))
}

fn parse_err(line: usize, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        line,
        reason: e.to_string(),
    }
}

fn cell<T: Scalar>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV row per record. `r_t` and `best_f` need exact values; `r_t`
/// additionally needs `f_star`.
pub fn trace_to_csv<T: Scalar>(trace: &BoTrace<T>, f_star: Option<T>) -> Result<String> {
    trace_to_csv_annotated(trace, f_star, &[])
}

/// [`trace_to_csv`] with extra `# key: value` lines after the config line.
pub fn trace_to_csv_annotated<T: Scalar>(
    trace: &BoTrace<T>,
    f_star: Option<T>,
    annotations: &[(&str, &str)],
) -> Result<String> {
    let config = serde_json::to_string(&trace.config).map_err(|e| Error::Numerical(e.to_string()))?;
    let best_y = trace.best_y();
    let has_exact = trace.records.iter().all(|r| r.f_exact.is_some());
    let best_f = if has_exact { Some(trace.best_f()?) } else { None };
    let r = match (has_exact, f_star) {
        (true, Some(fs)) => Some(error_sequence(trace, fs)?),
        _ => None,
    };
    let gain = cumulative_gain(trace)?;

    let mut out = String::new();
    writeln!(out, "# schema: {TRACE_SCHEMA}").unwrap();
    writeln!(out, "# config: {config}").unwrap();
    for (k, v) in annotations {
        writeln!(out, "# {k}: {v}").unwrap();
    }
    writeln!(out, "{}", CSV_COLUMNS.join(",")).unwrap();
    for (i, rec) in trace.records.iter().enumerate() {
        let row = [
            rec.t.to_string(),
            rec.y.to_string(),
            best_y[i].to_string(),
            cell(rec.f_exact),
            cell(best_f.as_ref().map(|b| b[i])),
            cell(r.as_ref().map(|r| r[i])),
            cell(rec.eta),
            rec.sigma.to_string(),
            gain[i].to_string(),
        ];
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    Ok(out)
}

/// A parsed CSV row; empty cells become `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub t: i64,
    pub cells: Vec<Option<f64>>,
}

impl CsvRow {
    pub fn get(&self, column: &str) -> Option<f64> {
        let k = CSV_COLUMNS.iter().position(|c| *c == column)?;
        if k == 0 {
            Some(self.t as f64)
        } else {
            self.cells[k - 1]
        }
    }
}

/// Parses a CSV written by [`trace_to_csv`], rejecting other schema
/// versions and malformed rows.
pub fn trace_csv_rows(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == format!("# schema: {TRACE_SCHEMA}") => {}
        Some((_, l)) => {
            return Err(Error::Parse {
                line: 1,
                reason: format!("unsupported schema line {l:?}"),
            })
        }
        None => return Err(Error::Parse { line: 1, reason: "empty file".into() }),
    }
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (i, line) in lines {
        let lineno = i + 1;
        if line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != CSV_COLUMNS.join(",") {
                return Err(Error::Parse { line: lineno, reason: "unexpected header".into() });
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != CSV_COLUMNS.len() {
            return Err(Error::Parse {
                line: lineno,
                reason: format!("expected {} fields, got {}", CSV_COLUMNS.len(), fields.len()),
            });
        }
        let t = fields[0].parse().map_err(|e| parse_err(lineno, e))?;
        let cells = fields[1..]
            .iter()
            .map(|f| if f.is_empty() { Ok(None) } else { f.parse().map(Some) })
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(lineno, e))?;
        rows.push(CsvRow { t, cells });
    }
    if !header_seen {
        return Err(Error::Parse { line: 1, reason: "missing header".into() });
    }
    Ok(rows)
}
