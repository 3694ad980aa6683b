//! Report emission.
//!
//! Every command produces one [`Report`]; `emit` renders it as JSON
//! (stable schema, full-precision numbers), CSV (for series data), or a
//! human-readable listing rounded to 6 significant digits. JSON output is
//! byte-deterministic for a fixed scenario and seed: object keys are
//! sorted and no timestamps or environment data are included.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

/// Version of the JSON report schema produced by this build.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Output of one command run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// Scenario values the command consumed.
    pub inputs: Value,
    /// Command results. Series data lives under `trajectory` or
    /// `per_trial` as arrays of uniform objects.
    pub outputs: Value,
    /// Cross-checks, derived ratios, and verdicts.
    pub diagnostics: Value,
}

impl Report {
    pub fn new(command: &str, inputs: Value, outputs: Value, diagnostics: Value) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            outputs,
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(Format::Human),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected human, json or csv)")),
        }
    }
}

/// Render a report in the requested format.
pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            text
        }
        Format::Csv => emit_csv(report),
        Format::Human => emit_human(report),
    }
}

/// Round to 6 significant digits for human output.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn fmt_value_human(value: &Value) -> String {
    match value {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => fmt_sig6(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

/// Full-precision scalar for CSV cells; floats use the shortest
/// round-trip representation.
fn fmt_value_raw(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// The known series layouts: schedule sweeps and per-trial statistics.
fn series_columns(key: &str) -> Option<&'static [&'static str]> {
    match key {
        "trajectory" => Some(&["step", "n_e", "n_omega", "efficacy"]),
        "per_trial" => Some(&["trial", "success_rate", "throughput"]),
        _ => None,
    }
}

fn find_series(report: &Report) -> Option<(&'static [&'static str], &Vec<Value>)> {
    let outputs = report.outputs.as_object()?;
    for (key, value) in outputs {
        if let (Some(columns), Some(rows)) = (series_columns(key), value.as_array()) {
            return Some((columns, rows));
        }
    }
    None
}

fn emit_csv(report: &Report) -> String {
    let mut out = String::new();
    if let Some((columns, rows)) = find_series(report) {
        out.push_str(&columns.join(","));
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = columns
                .iter()
                .map(|c| row.get(*c).map(fmt_value_raw).unwrap_or_default())
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        return out;
    }
    // No series: fall back to a key,value listing of scalar outputs.
    out.push_str("key,value\n");
    if let Some(outputs) = report.outputs.as_object() {
        for (key, value) in outputs {
            if !value.is_array() && !value.is_object() {
                let _ = writeln!(out, "{key},{}", fmt_value_raw(value));
            }
        }
    }
    out
}

fn emit_section(out: &mut String, name: &str, section: &Value) {
    let Some(map) = section.as_object() else {
        return;
    };
    if map.is_empty() {
        return;
    }
    let _ = writeln!(out, "{name}:");
    for (key, value) in map {
        match value {
            Value::Array(rows) if series_columns(key).is_some() => {
                let columns = series_columns(key).unwrap();
                let _ = writeln!(out, "  {key} ({} rows):", rows.len());
                let _ = writeln!(out, "    {}", columns.join("  "));
                for row in rows {
                    let cells: Vec<String> = columns
                        .iter()
                        .map(|c| row.get(*c).map(fmt_value_human).unwrap_or_default())
                        .collect();
                    let _ = writeln!(out, "    {}", cells.join("  "));
                }
            }
            other => {
                let _ = writeln!(out, "  {key} = {}", fmt_value_human(other));
            }
        }
    }
}

fn emit_human(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "netefficacy {}", report.command);
    emit_section(&mut out, "inputs", &report.inputs);
    emit_section(&mut out, "outputs", &report.outputs);
    emit_section(&mut out, "diagnostics", &report.diagnostics);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig6(1.8), "1.80000");
        assert_eq!(fmt_sig6(0.816496580927726), "0.816497");
        assert_eq!(fmt_sig6(25.0), "25.0000");
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(1234567.0), "1234567");
        assert_eq!(fmt_sig6(-0.001234567), "-0.00123457");
    }

    #[test]
    fn trajectory_csv_has_one_row_per_point() {
        let report = Report::new(
            "grow",
            json!({}),
            json!({
                "trajectory": [
                    { "step": 0, "n_e": 10, "n_omega": 100, "efficacy": 1.0 },
                    { "step": 1, "n_e": 20, "n_omega": 100, "efficacy": 4.0 },
                    { "step": 2, "n_e": 30, "n_omega": 100, "efficacy": 9.0 },
                ]
            }),
            json!({}),
        );
        let csv = emit(&report, Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "step,n_e,n_omega,efficacy");
        assert_eq!(lines[1], "0,10,100,1.0");
    }

    #[test]
    fn json_round_trips_without_loss() {
        let report = Report::new(
            "hetnet",
            json!({ "coverage": 0.6666666666666666 }),
            json!({ "total": 1.7999999999999998, "binding": "default" }),
            json!({}),
        );
        let text = emit(&report, Format::Json);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            parsed["outputs"]["total"].as_f64().unwrap(),
            1.7999999999999998
        );
        assert_eq!(
            parsed["inputs"]["coverage"].as_f64().unwrap(),
            0.6666666666666666
        );
    }

    #[test]
    fn json_emission_is_deterministic() {
        let make = || {
            Report::new(
                "efficacy",
                json!({ "b": 2, "a": 1 }),
                json!({ "z": 1.5, "m": { "y": 2, "x": 3 } }),
                json!({}),
            )
        };
        assert_eq!(emit(&make(), Format::Json), emit(&make(), Format::Json));
    }

    #[test]
    fn scalar_csv_fallback() {
        let report = Report::new(
            "hetnet",
            json!({}),
            json!({ "total": 1.8, "binding": "default" }),
            json!({}),
        );
        let csv = emit(&report, Format::Csv);
        assert!(csv.starts_with("key,value\n"));
        assert!(csv.contains("total,1.8\n"));
        assert!(csv.contains("binding,default\n"));
    }

    #[test]
    fn human_output_rounds() {
        let report = Report::new(
            "plan-coverage",
            json!({ "target": 3.0 }),
            json!({ "coverage": 0.816496580927726 }),
            json!({}),
        );
        let text = emit(&report, Format::Human);
        assert!(text.contains("coverage = 0.816497"), "text: {text}");
    }
}
