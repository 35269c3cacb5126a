use serde::{Deserialize, Serialize};

use crate::costs::CostVector;
use crate::nncore::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

/// Per-feature min/max measured on the training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

/// Labelled examples. Labels are 0-based class indices below `classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub inputs: Matrix,
    pub labels: Vec<usize>,
    pub classes: usize,
    pub split: Split,
    pub scaling: Option<Scaling>,
}

impl Dataset {
    pub fn new(inputs: Matrix, labels: Vec<usize>, classes: usize, split: Split) -> Result<Self> {
        if inputs.rows() != labels.len() {
            return Err(Error::LengthMismatch {
                what: "dataset labels",
                expected: inputs.rows(),
                got: labels.len(),
            });
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= classes) {
            return Err(Error::LabelOutOfRange { label, classes });
        }
        Ok(Self {
            inputs,
            labels,
            classes,
            split,
            scaling: None,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.cols()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    /// The listed examples, in the listed order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            inputs: self.inputs.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            classes: self.classes,
            split: self.split,
            scaling: self.scaling.clone(),
        }
    }

    /// The first `n` examples (or all, if fewer).
    pub fn truncate(&self, n: usize) -> Self {
        let idx: Vec<usize> = (0..n.min(self.len())).collect();
        self.subset(&idx)
    }

    /// Widens the class count, e.g. to align a test split with its train split.
    pub fn with_classes(mut self, classes: usize) -> Result<Self> {
        if let Some(&label) = self.labels.iter().find(|&&l| l >= classes) {
            return Err(Error::LabelOutOfRange { label, classes });
        }
        self.classes = classes;
        Ok(self)
    }

    pub fn with_split(mut self, split: Split) -> Self {
        self.split = split;
        self
    }
}

/// A dataset with one cost vector per example.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSensitiveDataset {
    pub data: Dataset,
    /// `N × K`; row `n` is the cost vector of example `n`.
    pub costs: Matrix,
}

impl CostSensitiveDataset {
    pub fn new(data: Dataset, costs: Matrix) -> Result<Self> {
        if costs.shape() != (data.len(), data.classes) {
            return Err(Error::ShapeMismatch {
                op: "cost-sensitive dataset",
                left: costs.shape(),
                right: (data.len(), data.classes),
            });
        }
        validate_cost_rows(&costs, &data.labels)?;
        Ok(Self { data, costs })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn classes(&self) -> usize {
        self.data.classes
    }

    pub fn inputs(&self) -> &Matrix {
        &self.data.inputs
    }

    pub fn labels(&self) -> &[usize] {
        &self.data.labels
    }

    pub fn split(&self) -> Split {
        self.data.split
    }

    pub fn cost_vector(&self, n: usize) -> CostVector {
        CostVector::new(self.costs.row(n).to_vec(), self.data.labels[n])
            .expect("validated at construction")
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            data: self.data.subset(indices),
            costs: self.costs.select_rows(indices),
        }
    }
}

/// Checks `c[y] = 0` and `c[k] ≥ 0` (finite) for every row.
pub(crate) fn validate_cost_rows(costs: &Matrix, labels: &[usize]) -> Result<()> {
    for (n, (row, &y)) in costs.row_iter().zip(labels).enumerate() {
        if y >= row.len() {
            return Err(Error::LabelOutOfRange {
                label: y,
                classes: row.len(),
            });
        }
        if row[y] != 0.0 {
            return Err(Error::TrueClassCost {
                row: n,
                label: y,
                value: row[y],
            });
        }
        if let Some((class, &value)) = row
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidCost { class, value });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_range_checked() {
        let x = Matrix::zeros(2, 1);
        assert!(matches!(
            Dataset::new(x.clone(), vec![0, 3], 3, Split::Train),
            Err(Error::LabelOutOfRange { label: 3, classes: 3 })
        ));
        assert!(Dataset::new(x, vec![0, 2], 3, Split::Train).is_ok());
    }

    #[test]
    fn cost_rows_need_zero_true_class_cost() {
        let d = Dataset::new(Matrix::zeros(1, 1), vec![1], 2, Split::Train).unwrap();
        let bad = Matrix::from_rows(&[[1.0, 0.5]]).unwrap();
        assert!(matches!(
            CostSensitiveDataset::new(d.clone(), bad),
            Err(Error::TrueClassCost { .. })
        ));
        let neg = Matrix::from_rows(&[[-1.0, 0.0]]).unwrap();
        assert!(CostSensitiveDataset::new(d.clone(), neg).is_err());
        let ok = Matrix::from_rows(&[[2.0, 0.0]]).unwrap();
        let cs = CostSensitiveDataset::new(d, ok).unwrap();
        assert_eq!(cs.cost_vector(0).costs(), &[2.0, 0.0]);
    }
}
