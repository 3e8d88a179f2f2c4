//! CSV/JSON output. Floats are written as `{:.16e}` (17 significant digits),
//! which round-trips every `f64`.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::simulator::EnergyTrace;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A comma-separated table preceded by `# ` comment lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        CsvTable { columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    /// Adds every line of `text` as a comment.
    pub fn with_comments(mut self, text: &str) -> Self {
        self.comments.extend(text.lines().map(str::to_owned));
        self
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&x| fmt_f64(x)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.render())
    }
}

/// Parses the data rows of a rendered table back into floats.
pub fn parse_csv_floats(text: &str) -> Result<Vec<Vec<f64>>, std::num::ParseFloatError> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::parse).collect())
        .collect()
}

/// `t, energy, dissipation, balance_residual`.
pub fn trace_table(trace: &EnergyTrace) -> CsvTable {
    let mut t = CsvTable::new(&["t", "energy", "dissipation", "balance_residual"]);
    for k in 0..trace.len() {
        t.push_floats(&[trace.times[k], trace.energy[k], trace.dissipation[k], trace.balance_residual[k]]);
    }
    t
}

/// `t, log t, log E` at roughly `points` log-spaced times (t > 0, E > 0 only).
pub fn plot_table(trace: &EnergyTrace, points: usize) -> CsvTable {
    let mut t = CsvTable::new(&["t", "log_t", "log_energy"]);
    let idx: Vec<usize> = (0..trace.len()).filter(|&k| trace.times[k] > 0.0 && trace.energy[k] > 0.0).collect();
    if idx.is_empty() {
        return t;
    }
    let (t0, t1) = (trace.times[idx[0]], trace.times[*idx.last().unwrap()]);
    let mut last = None;
    let m = points.max(2);
    for j in 0..m {
        let target = t0 * (t1 / t0).powf(j as f64 / (m - 1) as f64);
        let k = idx.partition_point(|&k| trace.times[k] < target).min(idx.len() - 1);
        if last == Some(k) {
            continue;
        }
        last = Some(k);
        let (tk, ek) = (trace.times[idx[k]], trace.energy[idx[k]]);
        t.push_floats(&[tk, tk.ln(), ek.ln()]);
    }
    t
}

/// `{"config": ..., "result": ...}`, pretty-printed.
pub fn json_with_config<T: serde::Serialize>(config: &serde_json::Value, result: &T) -> serde_json::Result<String> {
    let v = serde_json::json!({ "config": config, "result": result });
    serde_json::to_string_pretty(&v)
}

pub fn write_json<T: serde::Serialize>(path: &Path, config: &serde_json::Value, result: &T) -> io::Result<()> {
    let s = json_with_config(config, result).map_err(io::Error::other)?;
    std::fs::write(path, s + "\n")
}
