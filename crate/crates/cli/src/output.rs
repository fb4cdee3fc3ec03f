//! CSV files whose first line is `# ` followed by a one-line JSON manifest.

use crate::error::CliResult;
use serde::Serialize;
use serde_json::Value;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub parameters: Value,
    pub truncation: Value,
    pub tolerances: Value,
    pub version: String,
    pub columns: Vec<String>,
    /// Free-form results worth keeping next to the data (verdicts, deltas).
    pub summary: Value,
    pub duration_s: f64,
}

/// Collects the fixed part of a manifest and stamps the elapsed time per file.
pub struct RunContext {
    pub command: String,
    pub parameters: Value,
    pub truncation: Value,
    pub out_dir: PathBuf,
    started: Instant,
}

impl RunContext {
    pub fn new(command: &str, parameters: impl Serialize, truncation: Value, out_dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(RunContext {
            command: command.to_string(),
            parameters: serde_json::to_value(parameters)?,
            truncation,
            out_dir: out_dir.to_path_buf(),
            started: Instant::now(),
        })
    }

    pub fn set_parameter(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.parameters {
            map.insert(key.to_string(), value);
        }
    }

    fn manifest(&self, columns: &[&str], summary: Value) -> Manifest {
        Manifest {
            command: self.command.clone(),
            parameters: self.parameters.clone(),
            truncation: self.truncation.clone(),
            tolerances: serde_json::json!({
                "norm": multiplet_core::tol::NORM,
                "unitary": multiplet_core::tol::UNITARY,
                "leak": multiplet_core::tol::LEAK,
                "leak_margin": multiplet_core::tol::LEAK_MARGIN,
                "realness": multiplet_core::phase_space::REALNESS_TOL,
            }),
            version: env!("CARGO_PKG_VERSION").to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            summary,
            duration_s: self.started.elapsed().as_secs_f64(),
        }
    }

    /// Writes `name` in the output directory and returns its path.
    pub fn write_csv<R>(&self, name: &str, columns: &[&str], summary: Value, rows: R) -> CliResult<PathBuf>
    where
        R: IntoIterator<Item = Vec<Cell>>,
    {
        let path = self.out_dir.join(name);
        let mut file = std::io::BufWriter::new(fs::File::create(&path)?);
        writeln!(file, "# {}", serde_json::to_string(&self.manifest(columns, summary))?)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(columns)?;
        for row in rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(path)
    }
}

/// One CSV field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Missing,
    Flag(bool),
}

impl Cell {
    /// Floats use 17 significant digits, which round-trips every `f64`.
    pub fn render(&self) -> String {
        match *self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Missing => String::new(),
            Cell::Flag(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

/// Short, file-name friendly form of a strength: `1`, `1.2`, `0.25`.
pub fn num_tag(v: f64) -> String {
    format!("{v}")
}

/// Reads back a file written by [`RunContext::write_csv`].
#[cfg(test)]
pub fn read_csv(path: &Path) -> CliResult<(Value, Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path)?;
    let (first, rest) = text.split_once('\n').unwrap_or((&text, ""));
    let manifest: Value = serde_json::from_str(first.trim_start_matches('#').trim())?;
    let mut r = csv::Reader::from_reader(rest.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()?;
    Ok((manifest, header, rows))
}
