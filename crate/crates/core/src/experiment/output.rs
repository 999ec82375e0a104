//! CSV and JSON emission. Floats are written with 17 significant digits so
//! that files round-trip bit for bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::engine::TimeSeries;
use crate::error::Result;

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn time_series_csv(ts: &TimeSeries) -> String {
    let mut out = String::from("t");
    for l in &ts.labels {
        out.push(',');
        out.push_str(l);
    }
    for c in &ts.cuts {
        let _ = write!(out, ",osee_cut{c}");
    }
    out.push_str(",maxBond,discardedWeight\n");
    for k in 0..ts.len() {
        out.push_str(&format_float(ts.times[k]));
        for v in &ts.values[k] {
            out.push(',');
            out.push_str(&format_float(*v));
        }
        for v in &ts.osee[k] {
            out.push(',');
            out.push_str(&format_float(*v));
        }
        let _ = writeln!(out, ",{},{}", ts.max_bond[k], format_float(ts.discarded_weight[k]));
    }
    out
}

/// Parses a file written by [`time_series_csv`] back into header and rows.
pub fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("").split(',').map(str::to_string).collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

pub fn write_text(dir: &Path, file: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let p = dir.join(file);
    std::fs::write(&p, text)?;
    Ok(p)
}

#[derive(Serialize)]
pub struct Sidecar<'a, C: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub n: usize,
    pub config: &'a C,
    pub runtime_seconds: f64,
    pub truncation_flagged: bool,
}

pub fn write_json<T: Serialize>(dir: &Path, file: &str, value: &T) -> Result<PathBuf> {
    let text = serde_json::to_string_pretty(value).map_err(|e| crate::error::Error::Config(e.to_string()))?;
    write_text(dir, file, &(text + "\n"))
}
