use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{NetworkSpec, TrainConfig};
use crate::costs::EvalReport;
use crate::data::{CostSensitiveDataset, Split};
use crate::losses::auxit_objective;
use crate::nncore::{sgd_step, AuxNet, GradientSet, Matrix};
use crate::rng::{derived_rng, Rng};
use crate::{Error, Result};

/// RNG stream used for per-epoch shuffling.
pub(crate) const SHUFFLE_STREAM: u64 = 1;

/// Per-epoch mean training losses. `aux[i]` and `main` are unweighted; `total`
/// is the weighted mixture of those means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochLosses {
    pub epoch: usize,
    pub aux: Vec<f64>,
    pub main: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageEpoch {
    pub epoch: usize,
    pub reconstruction: f64,
    pub cost: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PretrainStage {
    pub stage: usize,
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub epochs: Vec<StageEpoch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub spec: NetworkSpec,
    pub config: TrainConfig,
    /// Coefficients actually applied, one per aux head.
    pub alphas: Vec<f64>,
    pub epochs: Vec<EpochLosses>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pretrain: Vec<PretrainStage>,
    pub eval: Option<EvalReport>,
}

/// Mini-batch momentum SGD on the auxiliary-head objective.
///
/// Data are reshuffled each epoch from a stream derived from `config.seed`.
/// Only training splits are accepted.
pub fn train(
    net: &mut AuxNet,
    train_set: &CostSensitiveDataset,
    config: &TrainConfig,
) -> Result<RunMetrics> {
    config.validate()?;
    check_training_data(net, train_set)?;
    let weights = config.weights_for(net.aux_heads().len())?;
    let mut rng = derived_rng(config.seed, SHUFFLE_STREAM);
    let mut velocity = GradientSet::zeros_like(net);
    let n = train_set.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let mut aux_sum = vec![0.0; net.aux_heads().len()];
        let mut main_sum = 0.0;
        for (batch, idx) in shuffled_batches(&mut order, config.batch_size, &mut rng).enumerate() {
            let (x, c, y) = gather(train_set, idx);
            let trace = net.forward(&x)?;
            let obj = auxit_objective(&trace, &c, &y, &weights)?;
            if !obj.total.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, batch });
            }
            let b = idx.len() as f64;
            for (s, h) in aux_sum.iter_mut().zip(&obj.aux) {
                *s += h.loss * b;
            }
            main_sum += obj.main.loss * b;
            let grads = net.backward(&trace, &obj.into_head_grads())?;
            if !grads.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, batch });
            }
            sgd_step(net, &grads, config.learning_rate, config.momentum, &mut velocity)?;
        }
        let aux: Vec<f64> = aux_sum.iter().map(|s| s / n as f64).collect();
        let main = main_sum / n as f64;
        let total = weights.total(&aux, main);
        history.push(EpochLosses {
            epoch: epoch + 1,
            aux,
            main,
            total,
        });
    }

    Ok(RunMetrics {
        spec: net.spec().clone(),
        config: config.clone(),
        alphas: weights.alphas().to_vec(),
        epochs: history,
        pretrain: Vec::new(),
        eval: None,
    })
}

pub(crate) fn check_training_data(net: &AuxNet, data: &CostSensitiveDataset) -> Result<()> {
    if data.split() != Split::Train {
        return Err(Error::InvalidConfig(
            "refusing to train on a test split".into(),
        ));
    }
    if data.is_empty() {
        return Err(Error::InvalidConfig("training set is empty".into()));
    }
    if data.inputs().cols() != net.input_dim() {
        return Err(Error::ShapeMismatch {
            op: "train (inputs)",
            left: data.inputs().shape(),
            right: (data.len(), net.input_dim()),
        });
    }
    if data.classes() != net.classes() {
        return Err(Error::LengthMismatch {
            what: "train (classes)",
            expected: net.classes(),
            got: data.classes(),
        });
    }
    Ok(())
}

pub(crate) fn gather(data: &CostSensitiveDataset, idx: &[usize]) -> (Matrix, Matrix, Vec<usize>) {
    (
        data.inputs().select_rows(idx),
        data.costs.select_rows(idx),
        idx.iter().map(|&i| data.labels()[i]).collect(),
    )
}

pub(crate) fn shuffled_batches<'a>(
    order: &'a mut [usize],
    batch_size: usize,
    rng: &mut Rng,
) -> std::slice::Chunks<'a, usize> {
    order.shuffle(rng);
    order.chunks(batch_size)
}

/// Argmin over the main-head cost estimates; ties go to the lowest class.
pub fn predict(net: &AuxNet, inputs: &Matrix) -> Result<Vec<usize>> {
    let out = net.main_output(inputs)?;
    Ok(out.row_iter().map(argmin).collect())
}

pub fn argmin(row: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in row.iter().enumerate().skip(1) {
        if v < row[best] {
            best = k;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{cast_matrix_to_vectors, CostMatrix};
    use crate::data::Dataset;
    use crate::models::{build_auxdnn, build_naivednn, AlphaSetting};
    use crate::nncore::Activation;

    fn separable(n_per_class: usize) -> CostSensitiveDataset {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n_per_class {
            let t = i as f64 / n_per_class as f64;
            rows.push(vec![0.1 + 0.2 * t, 0.2]);
            labels.push(0);
            rows.push(vec![0.7 + 0.2 * t, 0.8]);
            labels.push(1);
        }
        let d = Dataset::new(Matrix::from_rows(&rows).unwrap(), labels, 2, Split::Train).unwrap();
        cast_matrix_to_vectors(&d, &CostMatrix::zero_one(2)).unwrap()
    }

    #[test]
    fn argmin_and_ties() {
        assert_eq!(argmin(&[3.2, 0.1, 7.0]), 1);
        assert_eq!(argmin(&[1.0, 1.0, 5.0]), 0);
    }

    #[test]
    fn loss_history_has_one_entry_per_epoch() {
        let data = separable(10);
        let spec = NetworkSpec::uniform(2, 3, 4, Activation::Relu, 2);
        let mut net = build_auxdnn(&spec, 1).unwrap();
        let config = TrainConfig {
            epochs: 7,
            batch_size: 8,
            ..Default::default()
        };
        let m = train(&mut net, &data, &config).unwrap();
        assert_eq!(m.epochs.len(), 7);
        assert!(m.epochs.iter().all(|e| e.aux.len() == 2 && e.total.is_finite()));
        assert_eq!(m.alphas, vec![0.2, 0.2]);
    }

    #[test]
    fn separable_problem_is_learned() {
        let data = separable(20);
        let spec = NetworkSpec::uniform(2, 1, 4, Activation::Relu, 2);
        let mut net = build_naivednn(&spec, 3).unwrap();
        let config = TrainConfig {
            epochs: 200,
            batch_size: 8,
            learning_rate: 0.05,
            ..Default::default()
        };
        train(&mut net, &data, &config).unwrap();
        let pred = predict(&net, data.inputs()).unwrap();
        let cost: f64 = pred
            .iter()
            .enumerate()
            .map(|(n, &p)| data.costs.get(n, p))
            .sum::<f64>()
            / data.len() as f64;
        assert!(cost < 0.05, "average training cost {cost}");
    }

    #[test]
    fn no_aux_heads_ignore_alpha() {
        let data = separable(5);
        let spec = NetworkSpec::uniform(2, 2, 3, Activation::Relu, 2);
        let run = |alpha| {
            let mut net = build_naivednn(&spec, 2).unwrap();
            let config = TrainConfig {
                epochs: 3,
                batch_size: 4,
                alpha: AlphaSetting::Uniform(alpha),
                ..Default::default()
            };
            train(&mut net, &data, &config).unwrap();
            net.parameters()
        };
        assert_eq!(run(0.0), run(0.7));
    }

    #[test]
    fn refuses_test_split() {
        let mut data = separable(3);
        data.data.split = Split::Test;
        let mut net = build_naivednn(&NetworkSpec::uniform(2, 1, 3, Activation::Relu, 2), 0).unwrap();
        assert!(train(&mut net, &data, &TrainConfig::default()).is_err());
    }

    #[test]
    fn shuffled_batches_cover_every_index() {
        let mut order: Vec<usize> = (0..10).collect();
        let mut rng = derived_rng(0, SHUFFLE_STREAM);
        let mut seen: Vec<usize> = shuffled_batches(&mut order, 3, &mut rng).flatten().copied().collect();
        seen.sort();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn prediction_is_shift_invariant() {
        let spec = NetworkSpec::uniform(2, 1, 3, Activation::Relu, 3);
        let mut net = build_naivednn(&spec, 5).unwrap();
        let x = Matrix::from_rows(&[[0.1, 0.9], [0.5, 0.5], [0.9, 0.2]]).unwrap();
        let before = predict(&net, &x).unwrap();
        let mut p = net.parameters();
        // main-head biases are the last K entries without aux heads
        let len = p.len();
        for b in &mut p[len - 3..] {
            *b += 17.5;
        }
        net.set_parameters(&p).unwrap();
        assert_eq!(predict(&net, &x).unwrap(), before);
    }
}
