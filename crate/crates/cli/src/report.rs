//! Run outputs: deterministic CSV tables and a TOML run manifest.
//!
//! Floats are written as `{:.16e}` (17 significant digits), no timestamps
//! anywhere: identical configs produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

/// One checked invariant of a run. `threshold` is the bound (or expected
/// count) the verdict compares against; `observed` is the measurement.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: String,
    pub threshold: f64,
    pub observed: f64,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn bound(name: impl Into<String>, observed: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            threshold,
            observed,
            pass: observed < threshold,
            detail: String::new(),
        }
    }

    pub fn exact_count(name: impl Into<String>, observed: usize, expected: usize) -> Self {
        Self {
            name: name.into(),
            threshold: expected as f64,
            observed: observed as f64,
            pass: observed == expected,
            detail: String::new(),
        }
    }

    pub fn failure(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            threshold: 0.0,
            observed: f64::NAN,
            pass: false,
            detail: detail.into(),
        }
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub header: String,
    pub rows: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(path: &Path, report: &RunReport) -> std::io::Result<()> {
    let mut body = String::with_capacity(64 * (report.rows.len() + 1));
    body.push_str(&report.header);
    body.push('\n');
    for row in &report.rows {
        body.push_str(row);
        body.push('\n');
    }
    fs::write(path, body)
}

pub fn config_sha256(raw: &str) -> String {
    let digest = Sha256::digest(raw.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

pub fn write_manifest(
    path: &Path,
    command: &str,
    config_hash: &str,
    report: &RunReport,
) -> std::io::Result<()> {
    let mut doc = String::new();
    let _ = writeln!(doc, "command = \"{command}\"");
    let _ = writeln!(doc, "config_sha256 = \"{config_hash}\"");
    let _ = writeln!(doc, "cli_version = \"{}\"", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(doc, "core_version = \"{}\"", pointscat::VERSION);
    let _ = writeln!(
        doc,
        "all_pass = {}",
        if report.all_pass() { "true" } else { "false" }
    );
    for v in &report.verdicts {
        let _ = writeln!(doc);
        let _ = writeln!(doc, "[[verdict]]");
        let _ = writeln!(doc, "name = \"{}\"", v.name);
        let _ = writeln!(doc, "threshold = {}", fmt_f64(v.threshold));
        if v.observed.is_nan() {
            let _ = writeln!(doc, "observed = nan");
        } else {
            let _ = writeln!(doc, "observed = {}", fmt_f64(v.observed));
        }
        let _ = writeln!(doc, "pass = {}", if v.pass { "true" } else { "false" });
        if !v.detail.is_empty() {
            let _ = writeln!(doc, "detail = \"{}\"", v.detail.replace('"', "'"));
        }
    }
    fs::write(path, doc)
}
