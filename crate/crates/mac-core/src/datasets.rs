//! Dataset descriptors and numeric tabular data.
//!
//! A [`DatasetDescriptor`] is what the agents see: variable names plus prose.
//! A [`TabularData`] is what the statistical algorithms see: a dense,
//! fully-numeric column-labelled matrix. The two meet in the pipelines, where
//! descriptor order defines variable indices; data loaded from a file in a
//! different column order must be passed through [`TabularData::reorder`].

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset file not found: {0}")]
    MissingFile(String),
    #[error("duplicate column header {0:?}")]
    DuplicateHeader(String),
    #[error("non-numeric cell {value:?} at row {row}, col {col}")]
    NonNumericCell {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("CSV has a header but no data rows")]
    EmptyBody,
    #[error("unknown dataset id {0:?}")]
    UnknownDataset(String),
    #[error("row {0} has {1} cells, expected {2}")]
    RaggedRow(usize, usize, usize),
    #[error("non-finite value at row {row}, col {col}")]
    NonFinite { row: usize, col: usize },
    #[error("a table needs at least 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("a table needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("cannot reorder: column {0:?} not present in the table")]
    ColumnMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One variable of a dataset: its column name plus free-text role description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableMeta {
    pub name: String,
    pub description: String,
    /// Optional display form used when posing questions to agents
    /// (e.g. `Mpg(miles per gallon)`); `None` falls back to `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question_label: Option<String>,
}

impl VariableMeta {
    pub fn new(name: &str, description: &str) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            question_label: None,
        }
    }

    pub fn with_question_label(mut self, label: &str) -> Self {
        self.question_label = Some(label.into());
        self
    }

    /// Name as posed in debate questions.
    pub fn question_label(&self) -> &str {
        self.question_label.as_deref().unwrap_or(&self.name)
    }
}

/// Everything the agents are told about a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    pub id: String,
    /// Prose handed to the agents, completing the sentence
    /// "This dataset is about {prose_description}".
    pub prose_description: String,
    /// Variable order here defines variable indices everywhere downstream.
    pub variables: Vec<VariableMeta>,
}

impl DatasetDescriptor {
    pub fn variable_names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }
}

/// Dense numeric table; all statistical algorithms operate on this.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularData {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl TabularData {
    /// Validates shape: at least 2 columns, at least 2 rows, rectangular,
    /// every cell finite, no duplicate column names.
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, DatasetError> {
        if columns.len() < 2 {
            return Err(DatasetError::TooFewColumns(columns.len()));
        }
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(DatasetError::DuplicateHeader(c.clone()));
            }
        }
        if rows.len() < 2 {
            return Err(DatasetError::TooFewRows(rows.len()));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(DatasetError::RaggedRow(r, row.len(), columns.len()));
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(DatasetError::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self { columns, rows })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.rows[row][col]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Column by index, as an owned vector.
    pub fn column(&self, col: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[col]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Returns a copy whose columns are permuted into `order`.
    /// `order` must name every column exactly once.
    pub fn reorder(&self, order: &[String]) -> Result<Self, DatasetError> {
        if order.len() != self.columns.len() {
            return Err(DatasetError::ColumnMismatch(format!(
                "expected {} columns, got {}",
                self.columns.len(),
                order.len()
            )));
        }
        let mut perm = Vec::with_capacity(order.len());
        for name in order {
            match self.column_index(name) {
                Some(i) if !perm.contains(&i) => perm.push(i),
                _ => return Err(DatasetError::ColumnMismatch(name.clone())),
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| perm.iter().map(|&i| r[i]).collect())
            .collect();
        Ok(Self {
            columns: order.to_vec(),
            rows,
        })
    }

    /// Serializes to CSV text: header, then one line per row, `\n` endings,
    /// shortest round-trip float formatting. `load_csv` of the result
    /// reproduces the table exactly.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Loads a numeric CSV: first line is the header, every other line is a row
/// of decimal numbers. Accepts LF and CRLF. Missing values are not accepted;
/// curate files before loading.
pub fn load_csv(path: impl AsRef<Path>) -> Result<TabularData, DatasetError> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(DatasetError::MissingFile(path.display().to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text)
}

/// `load_csv` on in-memory text; same grammar and errors.
pub fn parse_csv(text: &str) -> Result<TabularData, DatasetError> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines.next().unwrap_or("");
    let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (r, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(columns.len());
        for (c, cell) in line.split(',').enumerate() {
            let cell = cell.trim();
            let v: f64 = cell.parse().map_err(|_| DatasetError::NonNumericCell {
                row: r,
                col: c,
                value: cell.to_string(),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DatasetError::EmptyBody);
    }
    TabularData::new(columns, rows)
}

/// Ids of the datasets with built-in descriptors.
pub const BUILTIN_DATASETS: [&str; 3] = ["auto_mpg", "dwd_climate", "sachs_protein"];

/// Descriptor for one of the built-in benchmark datasets. The prose is what
/// the debate prompts embed; variable order fixes the index order of every
/// matrix produced for that dataset.
pub fn builtin_descriptor(id: &str) -> Result<DatasetDescriptor, DatasetError> {
    match id {
        "auto_mpg" => Ok(DatasetDescriptor {
            id: id.into(),
            prose_description: "on automobile design and performance for cars in the 1970s \
                 and early 1980s. this dataset consists of the variables around the fuel \
                 consumption of cars.  With five variables: \u{201c}Weight\u{201d}, \
                 \u{201c}Displacement\u{201d}, \u{201c}Horsepower\u{201d}, \
                 \u{201c}Acceleration\u{201d} and \u{201c}Mpg\u{201d}(miles per gallon)s"
                .into(),
            variables: vec![
                VariableMeta::new("Weight", "vehicle weight in pounds"),
                VariableMeta::new("Displacement", "engine displacement in cubic inches"),
                VariableMeta::new("Horsepower", "engine horsepower"),
                VariableMeta::new(
                    "Acceleration",
                    "time to accelerate from 0 to 60 mph in seconds",
                ),
                VariableMeta::new("Mpg", "fuel efficiency in miles per gallon")
                    .with_question_label("Mpg(miles per gallon)"),
            ],
        }),
        "dwd_climate" => Ok(DatasetDescriptor {
            id: id.into(),
            prose_description: "on global climate variables , This dataset encompasses six \
                 continuous variables capturing climate observations such as altitude, \
                 temperature, precipitation levels, longitude, sunshine duration, and \
                 latitude. It is aimed at studying weather patterns, climate change \
                 impacts, and geographical correlations in climate variables."
                .into(),
            variables: vec![
                VariableMeta::new("Altitude", "station altitude in meters"),
                VariableMeta::new("Temperature", "mean annual temperature"),
                VariableMeta::new("Precipitation", "mean annual precipitation"),
                VariableMeta::new("Longitude", "station longitude"),
                VariableMeta::new("Sunshine", "mean annual sunshine duration"),
                VariableMeta::new("Latitude", "station latitude"),
            ],
        }),
        "sachs_protein" => Ok(DatasetDescriptor {
            id: id.into(),
            prose_description: "on protein signaling, The dataset comprises protein \
                 signaling measurements from multiparameter single-cell data, capturing \
                 the interactions among various proteins (raf, mek, plc, pip2, pip3, erk, \
                 akt, pka, pkc, p38, jnk). It's aimed at understanding signal transduction \
                 pathways within cells, derived from an influential study published in \
                 Science."
                .into(),
            variables: [
                "raf", "mek", "plc", "pip2", "pip3", "erk", "akt", "pka", "pkc", "p38", "jnk",
            ]
            .iter()
            .map(|p| VariableMeta::new(p, &format!("phosphorylation level of {p}")))
            .collect(),
        }),
        other => Err(DatasetError::UnknownDataset(other.into())),
    }
}

/// Renders the first `min(k, rows)` rows as a fixed-width block in the style
/// pandas prints a `DataFrame` — a right-aligned row-index column, two-space
/// separators, and per-column number formatting (integral columns printed
/// without decimals, others with the smallest uniform number of decimals).
/// Rendering is deterministic, so prompts built from it are reproducible.
pub fn summarize_sample(data: &TabularData, k: usize) -> String {
    let shown = k.min(data.n_rows());
    // Per-column decimal places: 0 if every value is integral, otherwise the
    // smallest d (at least 1) such that d decimals round-trip every value.
    let mut decimals = Vec::with_capacity(data.n_cols());
    for c in 0..data.n_cols() {
        let col: Vec<f64> = (0..shown).map(|r| data.value(r, c)).collect();
        let d = if col.iter().all(|v| v.fract() == 0.0) {
            0
        } else {
            let mut d = 1;
            while d < 12 {
                let scale = 10f64.powi(d);
                if col
                    .iter()
                    .all(|v| ((v * scale).round() / scale - v).abs() < 1e-9)
                {
                    break;
                }
                d += 1;
            }
            d
        };
        decimals.push(d as usize);
    }
    let cell = |r: usize, c: usize| -> String {
        let v = data.value(r, c);
        if decimals[c] == 0 {
            format!("{}", v as i64)
        } else {
            format!("{:.*}", decimals[c], v)
        }
    };
    let idx_width = if shown == 0 {
        1
    } else {
        format!("{}", shown - 1).len()
    };
    let widths: Vec<usize> = (0..data.n_cols())
        .map(|c| {
            let w = (0..shown).map(|r| cell(r, c).len()).max().unwrap_or(0);
            w.max(data.columns()[c].len())
        })
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:w$}", "", w = idx_width);
    for c in 0..data.n_cols() {
        let _ = write!(out, "  {:>w$}", data.columns()[c], w = widths[c]);
    }
    for r in 0..shown {
        out.push('\n');
        let _ = write!(out, "{:>w$}", r, w = idx_width);
        for c in 0..data.n_cols() {
            let _ = write!(out, "  {:>w$}", cell(r, c), w = widths[c]);
        }
    }
    out
}
