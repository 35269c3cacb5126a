use serde::{Deserialize, Serialize};

use crate::losses::{check_beta, MixtureWeights};
use crate::nncore::Activation;
use crate::{Error, Result};

/// Hidden-layer width used by the reference fully-connected experiments.
pub const DEFAULT_HIDDEN_WIDTH: usize = 1024;

/// Architecture of a fully-connected cost-estimation network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub input_dim: usize,
    /// One entry per hidden layer; the length is the depth `H`.
    pub hidden_widths: Vec<usize>,
    pub activation: Activation,
    pub classes: usize,
    /// Attach a `K`-neuron regression head to each of the first `H − 1`
    /// hidden layers.
    pub aux_enabled: bool,
}

impl NetworkSpec {
    /// `depth` hidden layers of `width` neurons each, aux heads enabled.
    pub fn uniform(
        input_dim: usize,
        depth: usize,
        width: usize,
        activation: Activation,
        classes: usize,
    ) -> Self {
        Self {
            input_dim,
            hidden_widths: vec![width; depth],
            activation,
            classes,
            aux_enabled: true,
        }
    }

    pub fn depth(&self) -> usize {
        self.hidden_widths.len()
    }

    pub fn with_aux(mut self, enabled: bool) -> Self {
        self.aux_enabled = enabled;
        self
    }

    pub fn with_activation(mut self, activation: Activation) -> Self {
        self.activation = activation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden_widths.is_empty() {
            return Err(Error::InvalidSpec("at least one hidden layer is required".into()));
        }
        if self.input_dim == 0 || self.classes == 0 || self.hidden_widths.contains(&0) {
            return Err(Error::InvalidSpec(format!(
                "dimensions must be positive: D={}, K={}, widths={:?}",
                self.input_dim, self.classes, self.hidden_widths
            )));
        }
        if self.activation == Activation::Identity {
            return Err(Error::InvalidSpec(
                "identity activation is reserved for regression heads".into(),
            ));
        }
        Ok(())
    }

    /// Closed-form parameter count:
    /// `Σᵢ (wᵢ₋₁ + 1)·wᵢ + (w_H + 1)·K + [aux] Σ_{i<H} (wᵢ + 1)·K`.
    pub fn param_count(&self) -> usize {
        let mut fan_in = self.input_dim;
        let mut total = 0;
        for &w in &self.hidden_widths {
            total += (fan_in + 1) * w;
            fan_in = w;
        }
        total += (fan_in + 1) * self.classes;
        if self.aux_enabled {
            total += self.hidden_widths[..self.depth() - 1]
                .iter()
                .map(|w| (w + 1) * self.classes)
                .sum::<usize>();
        }
        total
    }
}

/// Balancing coefficients for the aux heads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSetting {
    /// The same coefficient on every aux head.
    Uniform(f64),
    PerHead(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub alpha: AlphaSetting,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    /// CSAE mixing coefficient (CSDNN only).
    pub beta: f64,
    /// CSAE epochs per pretraining stage (CSDNN only).
    pub pretrain_epochs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            alpha: AlphaSetting::Uniform(0.2),
            learning_rate: 0.01,
            momentum: 0.9,
            batch_size: 64,
            epochs: 30,
            seed: 1,
            beta: 0.5,
            pretrain_epochs: 15,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch size must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidLearningRate(self.learning_rate));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::InvalidMomentum(self.momentum));
        }
        check_beta(self.beta)?;
        match &self.alpha {
            AlphaSetting::Uniform(a) => MixtureWeights::uniform(*a, 1).map(|_| ()),
            AlphaSetting::PerHead(v) => MixtureWeights::new(v.clone()).map(|_| ()),
        }
    }

    /// Expands the alpha setting to `heads` coefficients.
    pub fn weights_for(&self, heads: usize) -> Result<MixtureWeights> {
        match &self.alpha {
            AlphaSetting::Uniform(a) => MixtureWeights::uniform(*a, heads),
            AlphaSetting::PerHead(v) if v.len() == heads => MixtureWeights::new(v.clone()),
            AlphaSetting::PerHead(v) => Err(Error::LengthMismatch {
                what: "balancing coefficients",
                expected: heads,
                got: v.len(),
            }),
        }
    }
}
