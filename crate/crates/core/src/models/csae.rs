//! Cost-sensitive auto-encoder (CSAE) layer-wise pretraining and the CSDNN
//! baseline built on it.
//!
//! Each stage is a one-hidden-layer auto-encoder whose output is the input
//! reconstruction (sigmoid decoder) concatenated with `K` cost estimates, trained
//! on `(1 − β)·L_CE + β·L_OSR`. The encoder initializes the matching trunk
//! layer; decoder and cost neurons are discarded.

use super::train::{check_training_data, gather, shuffled_batches, train, PretrainStage, RunMetrics, StageEpoch};
use super::{build_naivednn, AlphaSetting, NetworkSpec, TrainConfig};
use crate::data::CostSensitiveDataset;
use crate::losses::{check_beta, cross_entropy_reconstruction, csae_objective, osr_loss};
use crate::nncore::{Activation, AuxNet, DenseLayer, LayerGrad, LayerOutput, Matrix};
use crate::rng::derived_rng;
use crate::{Error, Result};

const DECODER_STREAM: u64 = 100;
const PRETRAIN_SHUFFLE_STREAM: u64 = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct CsaeStage {
    pub encoder: DenseLayer,
    pub decoder: DenseLayer,
    pub cost_head: DenseLayer,
}

#[derive(Debug, Clone)]
pub struct CsaeTrace {
    pub hidden: LayerOutput,
    pub reconstruction: LayerOutput,
    pub cost: LayerOutput,
}

/// Unweighted component losses and the mixed total for one batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsaeLosses {
    pub reconstruction: f64,
    pub cost: f64,
    pub total: f64,
}

impl CsaeStage {
    /// Wraps `encoder` with a fresh sigmoid decoder and identity cost head.
    pub fn new(encoder: DenseLayer, classes: usize, seed: u64, stage: usize) -> Self {
        let mut rng = derived_rng(seed, DECODER_STREAM + stage as u64);
        let (input, hidden) = (encoder.input_dim(), encoder.output_dim());
        let decoder = DenseLayer::init(hidden, input, Activation::Sigmoid, &mut rng);
        let cost_head = DenseLayer::init(hidden, classes, Activation::Identity, &mut rng);
        Self {
            encoder,
            decoder,
            cost_head,
        }
    }

    pub fn forward(&self, x: &Matrix) -> Result<CsaeTrace> {
        let hidden = self.encoder.forward_traced(x)?;
        let reconstruction = self.decoder.forward_traced(&hidden.post)?;
        let cost = self.cost_head.forward_traced(&hidden.post)?;
        Ok(CsaeTrace {
            hidden,
            reconstruction,
            cost,
        })
    }

    /// `(1 − β)·L_CE(x̃, x) + β·L_OSR(r, c)` on one batch.
    pub fn objective(&self, x: &Matrix, costs: &Matrix, labels: &[usize], beta: f64) -> Result<CsaeLosses> {
        let trace = self.forward(x)?;
        Ok(self.losses(&trace, x, costs, labels, beta)?.0)
    }

    fn losses(
        &self,
        trace: &CsaeTrace,
        x: &Matrix,
        costs: &Matrix,
        labels: &[usize],
        beta: f64,
    ) -> Result<(CsaeLosses, Matrix, Matrix)> {
        let ce = cross_entropy_reconstruction(&trace.reconstruction.post, x)?;
        let osr = osr_loss(&trace.cost.post, costs, labels)?;
        let mix = csae_objective(&ce, &osr, beta)?;
        let mut d_recon = ce.grad;
        d_recon.scale(mix.reconstruction_weight);
        let mut d_cost = osr.grad;
        d_cost.scale(mix.cost_weight);
        Ok((
            CsaeLosses {
                reconstruction: ce.value,
                cost: osr.value,
                total: mix.total,
            },
            d_recon,
            d_cost,
        ))
    }

    /// Losses and gradients for encoder, decoder and cost head.
    pub fn gradients(
        &self,
        x: &Matrix,
        costs: &Matrix,
        labels: &[usize],
        beta: f64,
    ) -> Result<(CsaeLosses, [LayerGrad; 3])> {
        let trace = self.forward(x)?;
        let (losses, d_recon, d_cost) = self.losses(&trace, x, costs, labels, beta)?;
        let mut d_hidden = Matrix::zeros(trace.hidden.post.rows(), trace.hidden.post.cols());
        let decoder_grad = if d_recon.is_zero() {
            LayerGrad::zeros_like(&self.decoder)
        } else {
            let (g, d) = self.decoder.backward(&trace.hidden.post, &trace.reconstruction, &d_recon, true)?;
            d_hidden.add_assign(&d.expect("requested"))?;
            g
        };
        let cost_grad = if d_cost.is_zero() {
            LayerGrad::zeros_like(&self.cost_head)
        } else {
            let (g, d) = self.cost_head.backward(&trace.hidden.post, &trace.cost, &d_cost, true)?;
            d_hidden.add_assign(&d.expect("requested"))?;
            g
        };
        let (encoder_grad, _) = self.encoder.backward(x, &trace.hidden, &d_hidden, false)?;
        Ok((losses, [encoder_grad, decoder_grad, cost_grad]))
    }

    fn layers_mut(&mut self) -> [&mut DenseLayer; 3] {
        [&mut self.encoder, &mut self.decoder, &mut self.cost_head]
    }
}

/// Output of [`csae_pretrain`].
#[derive(Debug, Clone, PartialEq)]
pub struct Pretrained {
    pub trunk: Vec<DenseLayer>,
    pub stages: Vec<PretrainStage>,
}

/// Trains one CSAE stage on `input` (the representation of the previous
/// layer) and returns the trained stage with its loss history.
pub fn pretrain_stage(
    encoder: DenseLayer,
    input: &Matrix,
    data: &CostSensitiveDataset,
    config: &TrainConfig,
    stage: usize,
) -> Result<(CsaeStage, PretrainStage)> {
    check_beta(config.beta)?;
    if input.rows() != data.len() {
        return Err(Error::LengthMismatch {
            what: "pretraining representation",
            expected: data.len(),
            got: input.rows(),
        });
    }
    let mut csae = CsaeStage::new(encoder, data.classes(), config.seed, stage);
    let mut velocity: [LayerGrad; 3] = [
        LayerGrad::zeros_like(&csae.encoder),
        LayerGrad::zeros_like(&csae.decoder),
        LayerGrad::zeros_like(&csae.cost_head),
    ];
    let mut rng = derived_rng(config.seed, PRETRAIN_SHUFFLE_STREAM + stage as u64);
    let n = data.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut history = Vec::with_capacity(config.pretrain_epochs);

    for epoch in 0..config.pretrain_epochs {
        let (mut recon_sum, mut cost_sum) = (0.0, 0.0);
        for (batch, idx) in shuffled_batches(&mut order, config.batch_size, &mut rng).enumerate() {
            let (_, c, y) = gather(data, idx);
            let x = input.select_rows(idx);
            let (losses, grads) = csae.gradients(&x, &c, &y, config.beta)?;
            if !losses.total.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, batch });
            }
            let b = idx.len() as f64;
            recon_sum += losses.reconstruction * b;
            cost_sum += losses.cost * b;
            for ((layer, g), v) in csae.layers_mut().into_iter().zip(&grads).zip(velocity.iter_mut()) {
                momentum_update(layer, g, v, config.learning_rate, config.momentum);
            }
        }
        let reconstruction = recon_sum / n as f64;
        let cost = cost_sum / n as f64;
        history.push(StageEpoch {
            epoch: epoch + 1,
            reconstruction,
            cost,
            total: (1.0 - config.beta) * reconstruction + config.beta * cost,
        });
    }

    let record = PretrainStage {
        stage: stage + 1,
        input_dim: csae.encoder.input_dim(),
        hidden_dim: csae.encoder.output_dim(),
        epochs: history,
    };
    Ok((csae, record))
}

fn momentum_update(layer: &mut DenseLayer, g: &LayerGrad, v: &mut LayerGrad, lr: f64, momentum: f64) {
    let pairs = layer
        .weights
        .as_mut_slice()
        .iter_mut()
        .zip(g.weights.as_slice())
        .zip(v.weights.as_mut_slice())
        .chain(layer.bias.iter_mut().zip(&g.bias).zip(v.bias.iter_mut()));
    for ((p, g), v) in pairs {
        *v = momentum * *v - lr * g;
        *p += *v;
    }
}

/// Greedy layer-wise CSAE pretraining of every trunk layer.
///
/// Encoders start from the same initialization as [`build_naivednn`] with
/// `config.seed`, so zero pretraining epochs leave the trunk untouched.
pub fn csae_pretrain(
    spec: &NetworkSpec,
    train_set: &CostSensitiveDataset,
    config: &TrainConfig,
) -> Result<Pretrained> {
    check_csdnn(spec, config)?;
    let init = build_naivednn(spec, config.seed)?;
    check_training_data(&init, train_set)?;
    let mut representation = train_set.inputs().clone();
    let mut trunk = Vec::with_capacity(spec.depth());
    let mut stages = Vec::with_capacity(spec.depth());
    for (i, encoder) in init.trunk().iter().enumerate() {
        let (csae, record) = pretrain_stage(encoder.clone(), &representation, train_set, config, i)?;
        representation = csae.encoder.forward(&representation)?;
        trunk.push(csae.encoder);
        stages.push(record);
    }
    Ok(Pretrained { trunk, stages })
}

fn check_csdnn(spec: &NetworkSpec, config: &TrainConfig) -> Result<()> {
    if spec.activation != Activation::Sigmoid {
        return Err(Error::InvalidSpec(
            "CSAE pretraining requires sigmoid hidden layers".into(),
        ));
    }
    check_beta(config.beta)?;
    config.validate()
}

/// CSAE pretraining followed by end-to-end fine-tuning of the main-head
/// OSR loss. The output head is freshly initialized.
pub fn train_csdnn(
    spec: &NetworkSpec,
    train_set: &CostSensitiveDataset,
    config: &TrainConfig,
) -> Result<(AuxNet, RunMetrics)> {
    let pretrained = csae_pretrain(spec, train_set, config)?;
    let mut net = build_naivednn(spec, config.seed)?;
    for (slot, layer) in net.trunk_mut().iter_mut().zip(pretrained.trunk) {
        *slot = layer;
    }
    let fine_tune = TrainConfig {
        alpha: AlphaSetting::Uniform(0.0),
        ..config.clone()
    };
    let mut metrics = train(&mut net, train_set, &fine_tune)?;
    metrics.pretrain = pretrained.stages;
    Ok((net, metrics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{cast_matrix_to_vectors, randomized_proportional};
    use crate::data::{Dataset, Split};
    use crate::models::train;
    use crate::rng::seeded_rng;
    use rand::Rng;

    fn data(n: usize) -> CostSensitiveDataset {
        let mut rng = seeded_rng(8);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..5).map(|_| rng.random::<f64>()).collect()).collect();
        let labels = (0..n).map(|i| i % 3).collect();
        let d = Dataset::new(Matrix::from_rows(&rows).unwrap(), labels, 3, Split::Train).unwrap();
        let c = randomized_proportional(&d, 1).unwrap();
        cast_matrix_to_vectors(&d, &c).unwrap()
    }

    fn config(pretrain_epochs: usize, beta: f64) -> TrainConfig {
        TrainConfig {
            epochs: 2,
            pretrain_epochs,
            beta,
            batch_size: 8,
            ..Default::default()
        }
    }

    #[test]
    fn one_stage_per_hidden_layer_with_stacked_dims() {
        let spec = NetworkSpec::uniform(5, 2, 4, Activation::Sigmoid, 3).with_aux(false);
        let p = csae_pretrain(&spec, &data(30), &config(2, 0.5)).unwrap();
        assert_eq!(p.stages.len(), 2);
        assert_eq!(p.stages[0].input_dim, 5);
        assert_eq!(p.stages[1].input_dim, 4);
        assert!(p.stages.iter().all(|s| s.epochs.len() == 2));
    }

    #[test]
    fn zero_pretraining_matches_naive_sigmoid_network() {
        let spec = NetworkSpec::uniform(5, 2, 4, Activation::Sigmoid, 3);
        let d = data(30);
        let cfg = config(0, 0.5);
        let (csdnn, _) = train_csdnn(&spec, &d, &cfg).unwrap();
        let mut naive = build_naivednn(&spec, cfg.seed).unwrap();
        train(&mut naive, &d, &TrainConfig { alpha: AlphaSetting::Uniform(0.0), ..cfg }).unwrap();
        assert_eq!(csdnn.parameters(), naive.parameters());
    }

    #[test]
    fn metrics_hold_pretraining_and_fine_tuning_losses() {
        let spec = NetworkSpec::uniform(5, 2, 4, Activation::Sigmoid, 3);
        let (_, m) = train_csdnn(&spec, &data(30), &config(3, 0.5)).unwrap();
        assert_eq!(m.pretrain.len(), 2);
        assert!(m.pretrain.iter().all(|s| s.epochs.len() == 3));
        assert_eq!(m.epochs.len(), 2);
        assert!(m.alphas.is_empty());
    }

    #[test]
    fn rejects_relu_and_bad_beta() {
        let d = data(10);
        let relu = NetworkSpec::uniform(5, 1, 4, Activation::Relu, 3);
        assert!(csae_pretrain(&relu, &d, &config(1, 0.5)).is_err());
        let sig = relu.with_activation(Activation::Sigmoid);
        assert!(matches!(
            csae_pretrain(&sig, &d, &config(1, 1.5)),
            Err(Error::BetaOutOfRange(_))
        ));
    }

    #[test]
    fn pretraining_reduces_stage_objective() {
        let spec = NetworkSpec::uniform(5, 1, 6, Activation::Sigmoid, 3);
        let p = csae_pretrain(&spec, &data(60), &TrainConfig { learning_rate: 0.05, ..config(40, 0.5) }).unwrap();
        let e = &p.stages[0].epochs;
        assert!(e.last().unwrap().total < e[0].total, "{:?} -> {:?}", e[0], e.last());
    }
}
