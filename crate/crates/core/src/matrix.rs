//! Read-only access shared by the census and GDV matrices, so reordering and
//! rendering work on either.

use crate::graphlet::GdvMatrix;
use crate::triad::CensusMatrix;

pub trait MatrixView {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn value(&self, row: usize, col: usize) -> f64;
    fn row_label(&self, row: usize) -> String;
    fn col_label(&self, col: usize) -> String;

    fn row_values(&self, row: usize) -> Vec<f64> {
        (0..self.cols()).map(|c| self.value(row, c)).collect()
    }

    fn col_values(&self, col: usize) -> Vec<f64> {
        (0..self.rows()).map(|r| self.value(r, col)).collect()
    }
}

impl MatrixView for CensusMatrix {
    fn rows(&self) -> usize {
        CensusMatrix::rows(self)
    }

    fn cols(&self) -> usize {
        CensusMatrix::cols(self)
    }

    fn value(&self, row: usize, col: usize) -> f64 {
        self.get(row, col)
    }

    fn row_label(&self, row: usize) -> String {
        self.motifs[row].clone()
    }

    fn col_label(&self, col: usize) -> String {
        self.times[col].to_string()
    }
}

impl MatrixView for GdvMatrix {
    fn rows(&self) -> usize {
        self.orbit_count
    }

    fn cols(&self) -> usize {
        self.node_count()
    }

    fn value(&self, row: usize, col: usize) -> f64 {
        self.get(row, col) as f64
    }

    fn row_label(&self, row: usize) -> String {
        row.to_string()
    }

    fn col_label(&self, col: usize) -> String {
        self.node_ids[col].clone()
    }
}

/// Small dense matrix, mostly for tests and ad-hoc views.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// Row-major.
    pub values: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        DenseMatrix {
            row_labels: (0..rows.len()).map(|r| r.to_string()).collect(),
            col_labels: (0..cols).map(|c| c.to_string()).collect(),
            values: rows.concat(),
        }
    }
}

impl MatrixView for DenseMatrix {
    fn rows(&self) -> usize {
        self.row_labels.len()
    }

    fn cols(&self) -> usize {
        self.col_labels.len()
    }

    fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    fn row_label(&self, row: usize) -> String {
        self.row_labels[row].clone()
    }

    fn col_label(&self, col: usize) -> String {
        self.col_labels[col].clone()
    }
}
