//! Machine-readable artifacts: one JSON document per command run, CSV tables
//! with 12 significant digits, and the aggregate summary. The layout is
//! documented in `docs/report-schema.md`.

use convexa_core::verify::VerificationReport;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

pub const ARTIFACT_SCHEMA: &str = "convexa.artifact.v1";
pub const SUMMARY_SCHEMA: &str = "convexa.summary.v1";

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool_version: &'static str,
    pub generated_unix: u64,
}

impl Metadata {
    pub fn now() -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            generated_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

/// Everything one command run produced. `metadata` is the only field that
/// may differ between runs on identical input.
#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub schema: &'static str,
    pub command: String,
    pub exit_code: i32,
    pub reports: Vec<VerificationReport>,
    pub details: Value,
    pub metadata: Metadata,
}

impl Artifact {
    pub fn new(command: &str, reports: Vec<VerificationReport>, details: Value) -> Self {
        let exit_code = if reports.iter().all(|r| r.pass) { 0 } else { 1 };
        Self {
            schema: ARTIFACT_SCHEMA,
            command: command.to_string(),
            exit_code,
            reports,
            details,
            metadata: Metadata::now(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }
}

/// Drops the run metadata so two documents can be compared byte for byte.
pub fn strip_metadata(doc: &mut Value) {
    if let Some(obj) = doc.as_object_mut() {
        obj.remove("metadata");
    }
}

/// Decimal rendering with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..12).contains(&e) {
        let s = format!("{:.*}", (11 - e).max(0) as usize, x);
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn params_cell(params: &serde_json::Map<String, Value>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={}", v.as_f64().map_or_else(|| v.to_string(), sig12)))
        .collect::<Vec<_>>()
        .join(";")
}

fn num_cell(v: &Value) -> String {
    v.as_f64().map_or_else(|| "nan".into(), sig12)
}

const REPORT_COLUMNS: [&str; 6] = [
    "artifact",
    "check",
    "params",
    "max_residual",
    "slack",
    "pass",
];

fn report_row(artifact: &str, r: &Value) -> Vec<String> {
    vec![
        artifact.to_string(),
        r["check"].as_str().unwrap_or("").to_string(),
        r["params"].as_object().map(params_cell).unwrap_or_default(),
        num_cell(&r["max_residual"]),
        num_cell(&r["slack"]),
        r["pass"].as_bool().unwrap_or(false).to_string(),
    ]
}

/// One CSV row per report of an artifact.
pub fn reports_csv(artifact: &Artifact) -> String {
    let doc = serde_json::to_value(artifact).expect("artifact serializes");
    let rows = doc["reports"]
        .as_array()
        .map(|a| a.iter().map(|r| report_row(&artifact.command, r)).collect())
        .unwrap_or_else(Vec::new);
    csv_table(&REPORT_COLUMNS, rows)
}

pub fn reports_text(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", sig12(*v)))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            s,
            "{} {} [{}] max_residual={} slack={}",
            if r.pass { "PASS" } else { "FAIL" },
            r.check,
            params,
            sig12(r.max_residual),
            sig12(r.slack)
        );
        for n in &r.notes {
            let _ = writeln!(s, "    {n}");
        }
    }
    s
}

/// Aggregate of several artifacts, ordered by check name then artifact.
#[derive(Debug, Clone)]
pub struct Summary {
    pub json: Value,
    pub csv: String,
    pub exit_code: i32,
}

pub fn summarize(artifacts: &[(String, Value)], extra_files: &[String]) -> Summary {
    let mut rows: Vec<(String, String, Value)> = Vec::new();
    for (name, doc) in artifacts {
        for r in doc["reports"].as_array().into_iter().flatten() {
            let check = r["check"].as_str().unwrap_or("").to_string();
            rows.push((check, name.clone(), r.clone()));
        }
    }
    rows.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let failed = rows
        .iter()
        .filter(|r| !r.2["pass"].as_bool().unwrap_or(false))
        .count();
    let exit_code = if failed == 0 { 0 } else { 1 };
    let json = json!({
        "schema": SUMMARY_SCHEMA,
        "artifacts": artifacts.iter().map(|(n, d)| json!({
            "name": n,
            "command": d["command"],
            "exit_code": d["exit_code"],
        })).collect::<Vec<_>>(),
        "checks": rows.iter().map(|(_, a, r)| json!({
            "artifact": a,
            "check": r["check"],
            "params": r["params"],
            "max_residual": r["max_residual"],
            "slack": r["slack"],
            "pass": r["pass"],
        })).collect::<Vec<_>>(),
        "profiles": extra_files,
        "total": rows.len(),
        "failed": failed,
        "exit_code": exit_code,
    });
    let csv = csv_table(
        &REPORT_COLUMNS,
        rows.iter().map(|(_, a, r)| report_row(a, r)),
    );
    Summary {
        json,
        csv,
        exit_code,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(-2.25), "-2.25");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(std::f64::consts::PI * 1e3), "3141.59265359");
        assert_eq!(sig12(1.5e-9), "1.50000000000e-9");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-1e-300 * 0.0), "0");
        assert_eq!(sig12(f64::NAN), "nan");
        for x in [0.1234567890123456, 98765.4321012345, -7.0e-4] {
            let back: f64 = sig12(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }

    #[test]
    fn summary_is_sorted_and_counts_failures() {
        let mut a = VerificationReport::new("b-check");
        a.pass = false;
        let b = VerificationReport::new("a-check").param("k", 1.0);
        let art = Artifact::new("x", vec![a, b], Value::Null);
        assert_eq!(art.exit_code, 1);
        let doc = serde_json::to_value(&art).unwrap();
        let s = summarize(&[("x.json".into(), doc)], &[]);
        assert_eq!(s.exit_code, 1);
        assert_eq!(s.json["checks"][0]["check"], "a-check");
        assert_eq!(s.json["failed"], 1);
        assert!(s.csv.starts_with("artifact,check,params"));
    }
}
