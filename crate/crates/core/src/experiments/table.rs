//! CSV tables. Floats are written with 17 significant digits so a re-read
//! reproduces them bit for bit; failed entries are `NaN`.

use super::ExperimentError;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// `err1,...,errk` style column names.
    pub fn numbered(prefix: &str, k: usize) -> impl Iterator<Item = String> + '_ {
        (1..=k).map(move |i| format!("{prefix}{i}"))
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), ExperimentError> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        w.write_record(&self.header).map_err(|e| csv_error(path, e))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(|e| ExperimentError::io(path, e))
    }
}

/// A CSV read back as strings.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    path: String,
}

impl RawTable {
    pub fn read(path: &Path) -> Result<Self, ExperimentError> {
        let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let header = r
            .headers()
            .map_err(|e| csv_error(path, e))?
            .iter()
            .map(str::to_string)
            .collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<Result<Vec<Vec<String>>, _>>()
            .map_err(|e| csv_error(path, e))?;
        Ok(Self {
            header,
            rows,
            path: path.display().to_string(),
        })
    }

    fn bad(&self, reason: String) -> ExperimentError {
        ExperimentError::Table {
            path: self.path.clone(),
            reason,
        }
    }

    /// Fails unless the header equals `expected` exactly.
    pub fn expect_header(&self, expected: &[String]) -> Result<(), ExperimentError> {
        if self.header != expected {
            return Err(self.bad(format!("header {:?}, expected {:?}", self.header, expected)));
        }
        Ok(())
    }

    pub fn f64(&self, row: usize, col: usize) -> Result<f64, ExperimentError> {
        let s = &self.rows[row][col];
        s.parse().map_err(|_| self.bad(format!("row {row} column {col}: {s:?} is not a number")))
    }

    pub fn usize(&self, row: usize, col: usize) -> Result<usize, ExperimentError> {
        let s = &self.rows[row][col];
        s.parse().map_err(|_| self.bad(format!("row {row} column {col}: {s:?} is not an integer")))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> ExperimentError {
    ExperimentError::Table {
        path: path.display().to_string(),
        reason: e.to_string(),
    }
}
