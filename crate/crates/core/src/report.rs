//! Plain result records shared by the scans and the command-line writers.

use std::collections::BTreeMap;

use serde::Serialize;

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

impl Estimate {
    pub fn new(value: f64, abs_error: f64) -> Self {
        Self { value, abs_error }
    }

    pub fn rel_error(&self) -> f64 {
        self.abs_error / self.value.abs()
    }
}

/// A table of evaluated quantities over a grid plus summary statistics and
/// grid metadata. Column order is fixed by `columns`; every row has one entry
/// per column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub kind: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: BTreeMap<String, f64>,
    pub grid: BTreeMap<String, String>,
}

impl ScanReport {
    pub fn new(kind: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            kind: kind.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            grid: BTreeMap::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}
