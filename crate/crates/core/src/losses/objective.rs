//! Mixture objectives: the auxiliary-head objective
//! `Σᵢ αᵢ·L⁽ⁱ⁾ + L⁽*⁾` and the cost-sensitive auto-encoder objective
//! `(1 − β)·L_CE + β·L_OSR`.

use serde::{Deserialize, Serialize};

use super::{osr_loss, LossValue};
use crate::nncore::{ForwardTrace, HeadGrads, Matrix};
use crate::{Error, Result};

/// Balancing coefficients, one per aux head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureWeights {
    alphas: Vec<f64>,
}

impl MixtureWeights {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if let Some(a) = alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "balancing coefficient {a} must be finite and non-negative"
            )));
        }
        Ok(Self { alphas })
    }

    /// The same `alpha` for each of `heads` aux heads.
    pub fn uniform(alpha: f64, heads: usize) -> Result<Self> {
        Self::new(vec![alpha; heads])
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// `Σᵢ αᵢ·auxᵢ + main`, summed in head order.
    pub fn total(&self, aux: &[f64], main: f64) -> f64 {
        self.alphas
            .iter()
            .zip(aux)
            .map(|(a, l)| a * l)
            .sum::<f64>()
            + main
    }
}

/// One head's unweighted loss and its weighted gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadLoss {
    pub loss: f64,
    pub grad: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuxItObjective {
    pub aux: Vec<HeadLoss>,
    pub main: HeadLoss,
    pub total: f64,
}

impl AuxItObjective {
    pub fn aux_losses(&self) -> Vec<f64> {
        self.aux.iter().map(|h| h.loss).collect()
    }

    pub fn head_grads(&self) -> HeadGrads {
        HeadGrads {
            aux: self.aux.iter().map(|h| h.grad.clone()).collect(),
            main: self.main.grad.clone(),
        }
    }

    pub fn into_head_grads(self) -> HeadGrads {
        HeadGrads {
            aux: self.aux.into_iter().map(|h| h.grad).collect(),
            main: self.main.grad,
        }
    }
}

/// Evaluates every head of `trace` against the batch costs.
///
/// Aux gradients are scaled by their `αᵢ` here, at the head boundary; a zero
/// coefficient yields an exactly-zero gradient matrix.
pub fn auxit_objective(
    trace: &ForwardTrace,
    costs: &Matrix,
    labels: &[usize],
    weights: &MixtureWeights,
) -> Result<AuxItObjective> {
    if weights.alphas.len() != trace.aux.len() {
        return Err(Error::LengthMismatch {
            what: "balancing coefficients",
            expected: trace.aux.len(),
            got: weights.alphas.len(),
        });
    }
    let aux = trace
        .aux_outputs()
        .zip(&weights.alphas)
        .map(|(out, &alpha)| {
            let LossValue { value, mut grad } = osr_loss(out, costs, labels)?;
            if alpha == 0.0 {
                grad = Matrix::zeros(grad.rows(), grad.cols());
            } else {
                grad.scale(alpha);
            }
            Ok(HeadLoss { loss: value, grad })
        })
        .collect::<Result<Vec<_>>>()?;
    let main = osr_loss(trace.main_output(), costs, labels)?;
    let aux_values: Vec<f64> = aux.iter().map(|h| h.loss).collect();
    let total = weights.total(&aux_values, main.value);
    Ok(AuxItObjective {
        aux,
        main: HeadLoss {
            loss: main.value,
            grad: main.grad,
        },
        total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsaeObjective {
    pub total: f64,
    pub reconstruction_weight: f64,
    pub cost_weight: f64,
}

pub fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::BetaOutOfRange(beta))
    }
}

pub fn csae_objective(
    reconstruction_loss: &LossValue,
    cost_loss: &LossValue,
    beta: f64,
) -> Result<CsaeObjective> {
    check_beta(beta)?;
    let reconstruction_weight = 1.0 - beta;
    Ok(CsaeObjective {
        total: reconstruction_weight * reconstruction_loss.value + beta * cost_loss.value,
        reconstruction_weight,
        cost_weight: beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::NetworkSpec;
    use crate::nncore::{Activation, AuxNet};

    fn lv(value: f64) -> LossValue {
        LossValue {
            value,
            grad: Matrix::zeros(1, 1),
        }
    }

    fn setup(depth: usize) -> (ForwardTrace, Matrix, Vec<usize>) {
        let net = AuxNet::init(&NetworkSpec::uniform(3, depth, 5, Activation::Relu, 3), 4).unwrap();
        let x = Matrix::from_rows(&[[0.2, 0.4, 0.9], [0.8, 0.1, 0.3]]).unwrap();
        let c = Matrix::from_rows(&[[0.0, 2.0, 1.0], [3.0, 4.0, 0.0]]).unwrap();
        (net.forward(&x).unwrap(), c, vec![0, 2])
    }

    #[test]
    fn zero_alphas_leave_only_main_loss() {
        let (trace, c, y) = setup(3);
        let obj = auxit_objective(&trace, &c, &y, &MixtureWeights::uniform(0.0, 2).unwrap()).unwrap();
        assert_eq!(obj.total, obj.main.loss);
        assert!(obj.aux.iter().all(|h| h.grad.is_zero()));
        assert!(obj.aux.iter().all(|h| h.loss > 0.0));
    }

    #[test]
    fn uniform_alpha_scales_sum_of_aux_losses() {
        let (trace, c, y) = setup(4);
        let obj = auxit_objective(&trace, &c, &y, &MixtureWeights::uniform(0.3, 3).unwrap()).unwrap();
        let aux_sum: f64 = obj.aux.iter().map(|h| h.loss).sum();
        assert!((obj.total - (0.3 * aux_sum + obj.main.loss)).abs() < 1e-12);
    }

    #[test]
    fn weighted_gradients() {
        let (trace, c, y) = setup(2);
        let w = MixtureWeights::new(vec![0.5]).unwrap();
        let obj = auxit_objective(&trace, &c, &y, &w).unwrap();
        let raw = osr_loss(&trace.aux[0].post, &c, &y).unwrap();
        for (a, b) in obj.aux[0].grad.as_slice().iter().zip(raw.grad.as_slice()) {
            assert_eq!(*a, 0.5 * b);
        }
        assert_eq!(obj.main.grad, osr_loss(trace.main_output(), &c, &y).unwrap().grad);
    }

    #[test]
    fn alpha_count_must_match_aux_heads() {
        let (trace, c, y) = setup(3);
        assert!(matches!(
            auxit_objective(&trace, &c, &y, &MixtureWeights::uniform(0.2, 1).unwrap()),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(MixtureWeights::new(vec![-0.1]).is_err());
    }

    #[test]
    fn csae_mixture() {
        assert_eq!(csae_objective(&lv(2.0), &lv(4.0), 0.0).unwrap().total, 2.0);
        assert_eq!(csae_objective(&lv(2.0), &lv(4.0), 1.0).unwrap().total, 4.0);
        let mid = csae_objective(&lv(2.0), &lv(4.0), 0.5).unwrap();
        assert_eq!(mid.total, 3.0);
        assert_eq!((mid.reconstruction_weight, mid.cost_weight), (0.5, 0.5));
        assert!(matches!(
            csae_objective(&lv(2.0), &lv(4.0), 1.5),
            Err(Error::BetaOutOfRange(_))
        ));
    }
}
