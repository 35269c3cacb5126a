//! One-sided regression (OSR) loss for per-class cost estimation.
//!
//! For an example with label `y`, cost vector `c` and estimates `r`:
//!
//! ```text
//! L = Σ_k max(0, z_k · (r_k − c[k])),   z_k = +1 if k = y else −1
//! ```
//!
//! Over-estimating the (zero) cost of the true class and under-estimating the
//! cost of any other class are penalized; the opposite directions are free.
//! Predictions take the argmin of the estimates.

use super::LossValue;
use crate::data::validate_cost_rows;
use crate::nncore::Matrix;
use crate::{Error, Result};

/// Loss and derivative of one OSR term. This is the only place the hinge is
/// defined; every loss and gradient in the crate goes through it.
#[inline]
pub fn one_sided_term(estimate: f64, cost: f64, true_class: bool) -> (f64, f64) {
    let z = if true_class { 1.0 } else { -1.0 };
    let margin = z * (estimate - cost);
    if margin > 0.0 {
        (margin, z)
    } else {
        (0.0, 0.0)
    }
}

/// Batch-mean OSR loss and its gradient w.r.t. `estimates`.
pub fn osr_loss(estimates: &Matrix, costs: &Matrix, labels: &[usize]) -> Result<LossValue> {
    if estimates.shape() != costs.shape() {
        return Err(Error::ShapeMismatch {
            op: "osr_loss",
            left: estimates.shape(),
            right: costs.shape(),
        });
    }
    if labels.len() != estimates.rows() {
        return Err(Error::LengthMismatch {
            what: "osr_loss labels",
            expected: estimates.rows(),
            got: labels.len(),
        });
    }
    validate_cost_rows(costs, labels)?;

    let batch = estimates.rows();
    let inv = 1.0 / batch.max(1) as f64;
    let mut grad = Matrix::zeros(batch, estimates.cols());
    let mut total = 0.0;
    for (n, &y) in labels.iter().enumerate() {
        let mut row_loss = 0.0;
        for k in 0..estimates.cols() {
            let (l, g) = one_sided_term(estimates.get(n, k), costs.get(n, k), k == y);
            row_loss += l;
            grad.set(n, k, g * inv);
        }
        total += row_loss;
    }
    Ok(LossValue {
        value: total * inv,
        grad,
    })
}
