//! Loss functions: one-sided regression for cost estimation, cross-entropy
//! reconstruction, and the mixture objectives built from them.

mod ce;
mod objective;
mod osr;

use crate::nncore::Matrix;

pub use ce::cross_entropy_reconstruction;
pub use objective::{
    auxit_objective, check_beta, csae_objective, AuxItObjective, CsaeObjective, HeadLoss,
    MixtureWeights,
};
pub use osr::{one_sided_term, osr_loss};

/// A batch-mean loss and its gradient w.r.t. the head output it was computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct LossValue {
    pub value: f64,
    pub grad: Matrix,
}
