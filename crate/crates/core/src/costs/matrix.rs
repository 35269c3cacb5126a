use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{CostSensitiveDataset, Dataset};
use crate::nncore::Matrix;
use crate::{Error, Result};

/// `K × K` table where entry `(y, k)` is the cost of predicting a class-`y`
/// example as class `k`. Zero diagonal, non-negative, finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostMatrix {
    classes: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn new(classes: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != classes * classes {
            return Err(Error::LengthMismatch {
                what: "cost matrix entries",
                expected: classes * classes,
                got: entries.len(),
            });
        }
        for y in 0..classes {
            for k in 0..classes {
                let v = entries[y * classes + k];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidCostMatrix(format!(
                        "entry ({y}, {k}) = {v} is negative or non-finite"
                    )));
                }
                if y == k && v != 0.0 {
                    return Err(Error::InvalidCostMatrix(format!(
                        "diagonal entry ({y}, {y}) = {v} is not zero"
                    )));
                }
            }
        }
        Ok(Self { classes, entries })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        if m.rows() != m.cols() {
            return Err(Error::InvalidCostMatrix(format!(
                "not square: {:?}",
                m.shape()
            )));
        }
        Self::new(m.rows(), m.into_vec())
    }

    /// The 0/1 matrix of regular classification.
    pub fn zero_one(classes: usize) -> Self {
        let entries = (0..classes * classes)
            .map(|i| if i / classes == i % classes { 0.0 } else { 1.0 })
            .collect();
        Self { classes, entries }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    #[inline]
    pub fn get(&self, y: usize, k: usize) -> f64 {
        self.entries[y * self.classes + k]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.entries[y * self.classes..(y + 1) * self.classes]
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.classes).flat_map(move |y| {
            (0..self.classes)
                .filter(move |&k| k != y)
                .map(move |k| self.get(y, k))
        })
    }

    /// CSV with a `K=<count>` header line followed by `K` comma-separated rows.
    pub fn to_csv(&self) -> String {
        let mut out = format!("K={}\n", self.classes);
        for y in 0..self.classes {
            for (k, v) in self.row(y).iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write!(out, "{v}").expect("string write");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty cost matrix file".into()))?;
        let classes: usize = header
            .trim()
            .strip_prefix("K=")
            .and_then(|k| k.trim().parse().ok())
            .ok_or_else(|| Error::Format(format!("bad cost matrix header `{header}`")))?;
        let mut entries = Vec::with_capacity(classes * classes);
        let mut rows = 0;
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != classes {
                return Err(Error::CsvRagged {
                    line: i + 2,
                    expected: classes,
                    found: cells.len(),
                });
            }
            for (c, cell) in cells.iter().enumerate() {
                entries.push(cell.parse().map_err(|_| Error::CsvNonNumeric {
                    line: i + 2,
                    column: c,
                    value: cell.to_string(),
                })?);
            }
            rows += 1;
        }
        if rows != classes {
            return Err(Error::Format(format!(
                "cost matrix header says K={classes} but {rows} rows follow"
            )));
        }
        Self::new(classes, entries)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

/// Per-example costs: `costs[k]` is the cost of predicting class `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector {
    costs: Vec<f64>,
    label: usize,
}

impl CostVector {
    pub fn new(costs: Vec<f64>, label: usize) -> Result<Self> {
        if label >= costs.len() {
            return Err(Error::LabelOutOfRange {
                label,
                classes: costs.len(),
            });
        }
        if costs[label] != 0.0 {
            return Err(Error::TrueClassCost {
                row: 0,
                label,
                value: costs[label],
            });
        }
        if let Some((class, &value)) = costs
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidCost { class, value });
        }
        Ok(Self { costs, label })
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn label(&self) -> usize {
        self.label
    }
}

/// Attaches to every example the row of `matrix` indexed by its label.
pub fn cast_matrix_to_vectors(
    dataset: &Dataset,
    matrix: &CostMatrix,
) -> Result<CostSensitiveDataset> {
    if matrix.classes() != dataset.classes {
        return Err(Error::LengthMismatch {
            what: "cost matrix classes",
            expected: dataset.classes,
            got: matrix.classes(),
        });
    }
    let mut costs = Matrix::zeros(dataset.len(), dataset.classes);
    for (n, &y) in dataset.labels.iter().enumerate() {
        if y >= matrix.classes() {
            return Err(Error::LabelOutOfRange {
                label: y,
                classes: matrix.classes(),
            });
        }
        costs.row_mut(n).copy_from_slice(matrix.row(y));
    }
    CostSensitiveDataset::new(dataset.clone(), costs)
}
