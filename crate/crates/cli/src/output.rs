//! CSV and JSON serialization.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly. Files are written to a temporary sibling
//! and renamed into place, so a failed run never leaves a partial output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use bec_scatter::AngularSpectrum;

use crate::config::Format;
use crate::error::CliError;

pub const SPECTRUM_COLUMNS: [&str; 6] = [
    "theta_rad",
    "q_over_hbar_k",
    "vbar2",
    "dwdOmega_per_gamma",
    "enhancement",
    "asymptote_per_gamma",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Flag(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Number)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "Infinity".to_owned()
    } else {
        "-Infinity".to_owned()
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Number(x) => format_number(*x),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Number(x) if x.is_finite() => format_number(*x),
            // JSON has no infinities
            Cell::Number(_) | Cell::Empty => "null".to_owned(),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) => json_string(s),
        }
    }
}

/// Named columns and rows of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    /// A one-row table from `(name, value)` pairs.
    pub fn record(fields: Vec<(&'static str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = fields.into_iter().unzip();
        Self {
            columns,
            rows: vec![row],
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json_object(&self, row: &[Cell], indent: &str) -> String {
        let mut out = String::from("{");
        for (i, (name, cell)) in self.columns.iter().zip(row).enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(
                out,
                "{sep}\n{indent}  {}: {}",
                json_string(name),
                cell.json()
            );
        }
        let _ = write!(out, "\n{indent}}}");
        out
    }

    /// Array of row objects.
    pub fn to_json_rows(&self) -> String {
        if self.rows.is_empty() {
            return "[]\n".to_owned();
        }
        let objects: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("  {}", self.json_object(r, "  ")))
            .collect();
        format!("[\n{}\n]\n", objects.join(",\n"))
    }

    /// The first row as a single object.
    pub fn to_json_record(&self) -> String {
        let row = self.rows.first().map(Vec::as_slice).unwrap_or(&[]);
        format!("{}\n", self.json_object(row, ""))
    }

    pub fn render(&self, format: Format, as_record: bool) -> String {
        match (format, as_record) {
            (Format::Csv, _) => self.to_csv(),
            (Format::Json, true) => self.to_json_record(),
            (Format::Json, false) => self.to_json_rows(),
        }
    }
}

pub fn spectrum_table(spectrum: &AngularSpectrum) -> Table {
    let mut table = Table::new(&SPECTRUM_COLUMNS);
    for p in &spectrum.rows {
        table.rows.push(vec![
            p.theta.into(),
            p.q_over_hbar_k.into(),
            p.vbar2.into(),
            p.dw_domega.into(),
            p.enhancement.into(),
            p.asymptote.into(),
        ]);
    }
    table
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

impl From<Option<PathBuf>> for Destination {
    fn from(p: Option<PathBuf>) -> Self {
        p.map_or(Destination::Stdout, Destination::File)
    }
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let shown = path.display().to_string();
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(&shown, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(&shown, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(&shown, e))?;
    tmp.persist(path)
        .map_err(|e| CliError::io(&shown, e.error))?;
    Ok(())
}

pub fn emit(text: &str, destination: &Destination) -> Result<(), CliError> {
    match destination {
        Destination::Stdout => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
        Destination::File(path) => write_atomic(path, text.as_bytes()),
    }
}

pub fn write_spectrum(
    spectrum: &AngularSpectrum,
    format: Format,
    destination: &Destination,
) -> Result<(), CliError> {
    emit(&spectrum_table(spectrum).render(format, false), destination)
}
