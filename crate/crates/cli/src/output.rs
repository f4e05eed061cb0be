//! CSV tables, plot hints and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

/// 17 significant digits: enough to recover every `f64` exactly.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Suggested axes for an external plotter.
#[derive(Debug, Clone, Default)]
pub struct PlotSpec {
    pub title: String,
    pub x: String,
    pub y: Vec<String>,
    pub x_label: String,
    pub y_label: String,
    /// `line`, `scatter` or `table`.
    pub style: String,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub plot: PlotSpec,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            plot: PlotSpec::default(),
        }
    }

    pub fn with_columns(name: &str, columns: Vec<String>) -> Self {
        Table { name: name.into(), columns, rows: Vec::new(), plot: PlotSpec::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }

    pub fn plot(mut self, title: &str, x: &str, y: &[&str], x_label: &str, y_label: &str, style: &str) -> Self {
        self.plot = PlotSpec {
            title: title.into(),
            x: x.into(),
            y: y.iter().map(|s| s.to_string()).collect(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            style: style.into(),
        };
        self
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[k] {
                    Cell::Num(x) => *x,
                    Cell::Int(i) => *i as f64,
                    Cell::Text(_) => f64::NAN,
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let err = |e: csv::Error| CliError::io(e.to_string());
        w.write_record(&self.columns).map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::io(e.to_string()))
    }

    fn plotspec(&self) -> String {
        let p = &self.plot;
        let y = if p.y.is_empty() { self.columns[1..].join(", ") } else { p.y.join(", ") };
        let x = if p.x.is_empty() { self.columns[0].clone() } else { p.x.clone() };
        format!(
            "file = {}.csv\ntitle = {}\nx = {x}\ny = {y}\nx_label = {}\ny_label = {}\nstyle = {}\n",
            self.name,
            p.title,
            p.x_label,
            p.y_label,
            if p.style.is_empty() { "line" } else { &p.style },
        )
    }
}

/// Re-serialize CSV text: numeric fields are parsed and printed again.
pub fn reserialize_csv(text: &str) -> CliResult<String> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::io(e.to_string()))?;
        let fields: Vec<String> = rec
            .iter()
            .map(|f| {
                if k > 0 && f.contains('e') {
                    f.parse::<f64>().map(fmt_num).unwrap_or_else(|_| f.to_string())
                } else {
                    f.to_string()
                }
            })
            .collect();
        w.write_record(&fields).map_err(|e| CliError::io(e.to_string()))?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::io(e.to_string()))?).map_err(|e| CliError::io(e.to_string()))
}

#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    /// Scenario-level results; written to `summary.json`.
    pub summary: serde_json::Map<String, serde_json::Value>,
    pub warnings: Vec<String>,
}

impl RunOutput {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        let w = w.into();
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    scenario: &'static str,
    seed: u64,
    config: &'a ScenarioConfig,
    started_unix_s: f64,
    wall_time_s: f64,
    files: Vec<String>,
    warnings: &'a [String],
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    f.write_all(contents.as_bytes()).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

/// Write every table, its plot hint, `summary.json` and `meta.json`.
///
/// Only `meta.json` carries timestamps; everything else is a pure function
/// of the configuration and seed.
pub fn write_outputs(
    dir: &Path,
    cfg: &ScenarioConfig,
    out: &RunOutput,
    started_unix_s: f64,
    wall_time_s: f64,
) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for t in &out.tables {
        let csv = dir.join(format!("{}.csv", t.name));
        write_file(&csv, &t.to_csv()?)?;
        let spec = dir.join(format!("{}.plotspec", t.name));
        write_file(&spec, &t.plotspec())?;
        files.push(csv);
        files.push(spec);
    }
    let mut summary = out.summary.clone();
    summary.insert("warnings".into(), serde_json::to_value(&out.warnings).unwrap());
    let summary_path = dir.join("summary.json");
    write_file(&summary_path, &(serde_json::to_string_pretty(&summary).unwrap() + "\n"))?;
    files.push(summary_path);
    let manifest = Manifest {
        tool: "superatom",
        version: env!("CARGO_PKG_VERSION"),
        scenario: cfg.scenario.name(),
        seed: cfg.seed,
        config: cfg,
        started_unix_s,
        wall_time_s,
        files: files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
        warnings: &out.warnings,
    };
    let meta = dir.join("meta.json");
    write_file(&meta, &(serde_json::to_string_pretty(&manifest).unwrap() + "\n"))?;
    files.push(meta);
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips() {
        let mut t = Table::new("x", &["t", "label", "n", "v"]);
        for (k, v) in [0.1, 1.0 / 3.0, -2.5e-300, f64::MAX, 0.0, f64::INFINITY].into_iter().enumerate() {
            t.push(vec![Cell::Num(k as f64 * 0.1), Cell::from("a b"), Cell::from(k), Cell::Num(v)]);
        }
        let text = t.to_csv().unwrap();
        assert_eq!(reserialize_csv(&text).unwrap(), text);
        let back: Vec<f64> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
        assert_eq!(back[1], 1.0 / 3.0);
        assert_eq!(back[2], -2.5e-300);
    }
}
