//! Data pipeline: CSV ingestion, calendar alignment, feature-table
//! assembly, normalization, chronological splitting, sample windowing,
//! and synthetic data generation.

pub mod calendar;
pub mod csv_io;
pub mod features;
pub mod normalize;
pub mod split;
pub mod synthetic;
pub mod window;

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// Dense per-market table of named feature columns, all cells defined.
///
/// `label_close` keeps the raw (never normalized) close used by the
/// labeling rule, so normalization cannot disturb labels.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    pub market: String,
    pub dates: Vec<NaiveDate>,
    pub names: Vec<String>,
    /// Column-major: `columns[c][row]`.
    pub columns: Vec<Vec<f64>>,
    pub label_close: Vec<f64>,
    pub normalized: bool,
}

impl FeatureTable {
    pub fn rows(&self) -> usize {
        self.dates.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    /// One row in column order.
    pub fn row(&self, r: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[r]).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.names.len() != self.columns.len() {
            return Err(Error::invalid_data(format!(
                "table {}: {} names vs {} columns",
                self.market,
                self.names.len(),
                self.columns.len()
            )));
        }
        for (name, col) in self.names.iter().zip(&self.columns) {
            if col.len() != self.dates.len() {
                return Err(Error::invalid_data(format!(
                    "table {}: column {} has {} rows, expected {}",
                    self.market,
                    name,
                    col.len(),
                    self.dates.len()
                )));
            }
            if let Some(bad) = col.iter().find(|v| !v.is_finite()) {
                return Err(Error::invalid_data(format!(
                    "table {}: column {} contains non-finite value {}",
                    self.market, name, bad
                )));
            }
        }
        if self.label_close.len() != self.dates.len() {
            return Err(Error::invalid_data(format!(
                "table {}: label close length mismatch",
                self.market
            )));
        }
        Ok(())
    }
}
