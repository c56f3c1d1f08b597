use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Rows of one result table plus its JSON form.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
    /// Printed to stderr; never part of the output file.
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(header: Vec<&'static str>, json: impl Serialize) -> Result<Self, CliError> {
        Ok(Self { header, rows: Vec::new(), json: serde_json::to_value(json)?, warnings: Vec::new() })
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }
}

/// Nine significant digits, shortest form. Values that would print as
/// exactly 0 or 1 without being so keep full precision.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let s = if (-5..9).contains(&exp) {
        trim_zeros(format!("{:.*}", (8 - exp).max(0) as usize, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    };
    let collapsed = matches!(s.as_str(), "0" | "-0" | "1" | "-1") && x.abs() != 1.0;
    if collapsed {
        x.to_string()
    } else {
        s
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// CSV body preceded by `#` comment lines carrying the seed and spec hash.
pub fn render_csv(report: &Report, command: &str, seed: u64, spec_hash: &str) -> Result<String, CliError> {
    let mut out = format!("# command={command}\n# seed={seed}\n# spec_sha256={spec_hash}\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&report.header).map_err(|e| CliError::Runtime(e.to_string()))?;
    for row in &report.rows {
        w.write_record(row).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

pub fn render_json(report: &Report, command: &str, seed: u64, spec_hash: &str) -> Result<String, CliError> {
    let doc = serde_json::json!({
        "command": command,
        "seed": seed,
        "spec_sha256": spec_hash,
        "result": report.json,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}
