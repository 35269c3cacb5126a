use serde::{Deserialize, Serialize};

use crate::data::CostSensitiveDataset;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Mean of `cₙ[predictionₙ]`.
    pub average_cost: f64,
    pub error_rate: f64,
    /// Number of test examples predicted as each class.
    pub prediction_counts: Vec<usize>,
}

pub fn evaluate(predictions: &[usize], test: &CostSensitiveDataset) -> Result<EvalReport> {
    if predictions.len() != test.len() {
        return Err(Error::LengthMismatch {
            what: "predictions",
            expected: test.len(),
            got: predictions.len(),
        });
    }
    let classes = test.classes();
    let mut counts = vec![0; classes];
    let mut cost = 0.0;
    let mut errors = 0usize;
    for (n, (&p, &y)) in predictions.iter().zip(test.labels()).enumerate() {
        if p >= classes {
            return Err(Error::LabelOutOfRange { label: p, classes });
        }
        counts[p] += 1;
        cost += test.costs.get(n, p);
        errors += usize::from(p != y);
    }
    let n = test.len().max(1) as f64;
    Ok(EvalReport {
        average_cost: cost / n,
        error_rate: errors as f64 / n,
        prediction_counts: counts,
    })
}
