//! Run reports: JSON, human-readable listing and CSV tables.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::input::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Vec<Value>,
    /// Wall time; the only field that varies between identical runs.
    pub timing_ms: f64,
    pub version: String,
}

impl RunReport {
    pub fn to_json(&self) -> CliResult<String> {
        Ok(reflpos::json::to_string_pretty(self)?)
    }

    pub fn render_human(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "reflpos {} · {}", self.version, self.command)?;
        for r in &self.results {
            writeln!(out)?;
            let mut rows = Vec::new();
            flatten("", r, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in rows {
                writeln!(out, "  {k:<width$}  {v}")?;
            }
        }
        writeln!(out)?;
        if self.results.iter().any(|r| r.to_string().contains("\"verdict\"")) {
            writeln!(out, "PASS means no violation was found on the sampled grid at the stated tolerance.")?;
        }
        writeln!(out, "({:.1} ms)", self.timing_ms)
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.6e}"),
            _ => n.to_string(),
        }),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Dotted key paths with printable values; long numeric arrays collapse.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some()) => {
            let s = if a.len() <= 16 {
                format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", "))
            } else {
                format!("[{} values]", a.len())
            };
            rows.push((prefix.to_string(), s));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other).unwrap_or_default())),
    }
}

/// Writes `t,value` rows with a header.
pub fn write_csv(path: &Path, rows: &[(f64, f64)]) -> CliResult<()> {
    let io = |e: csv::Error| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["t", "value"]).map_err(io)?;
    for (t, v) in rows {
        w.write_record([format!("{t:e}"), format!("{v:e}")]).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> RunReport {
        RunReport {
            command: "check-pd".into(),
            inputs: json!({"points": 12, "interval": [0.1, 2.0]}),
            results: vec![json!({"label": "plus", "verdict": "PASS", "extremal_eig": 1.0 / 3.0, "witness": null, "grid": (0..20).map(|i| i as f64 * 0.1).collect::<Vec<_>>()})],
            timing_ms: 1.25,
            version: "0.1.0".into(),
        }
    }

    #[test]
    fn json_rerender_is_byte_identical() {
        let s = sample().to_json().unwrap();
        let back: RunReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
    }

    #[test]
    fn human_listing_collapses_long_arrays() {
        let mut out = Vec::new();
        sample().render_human(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("verdict"));
        assert!(text.contains("[20 values]"));
        assert!(text.contains("3.333333e-1"));
        assert!(text.contains("witness"));
    }

    #[test]
    fn csv_has_header_and_two_columns() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_csv(&p, &[(0.5, 1.0), (1.0, 2f64.ln())]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,value"));
        assert!(lines.all(|l| l.split(',').count() == 2));
    }
}
