//! The three competing systems: AuxDNN (aux heads on every hidden layer but
//! the last), NaiveDNN (main head only) and CSDNN (sigmoid trunk pretrained
//! with cost-sensitive auto-encoders).

mod build;
mod checkpoint;
mod csae;
mod spec;
mod train;

use serde::{Deserialize, Serialize};

pub use build::{build_auxdnn, build_naivednn};
pub use checkpoint::{load_checkpoint, save_checkpoint, sidecar_path, Sidecar, CHECKPOINT_MAGIC};
pub use csae::{csae_pretrain, pretrain_stage, train_csdnn, CsaeLosses, CsaeStage, CsaeTrace, Pretrained};
pub use spec::{AlphaSetting, NetworkSpec, TrainConfig, DEFAULT_HIDDEN_WIDTH};
pub use train::{argmin, predict, train, EpochLosses, PretrainStage, RunMetrics, StageEpoch};

use crate::costs::evaluate;
use crate::data::CostSensitiveDataset;
use crate::nncore::{Activation, AuxNet};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    AuxDnn,
    NaiveDnn,
    Csdnn,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::AuxDnn => "auxdnn",
            ModelKind::NaiveDnn => "naivednn",
            ModelKind::Csdnn => "csdnn",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "auxdnn" => Ok(ModelKind::AuxDnn),
            "naivednn" => Ok(ModelKind::NaiveDnn),
            "csdnn" => Ok(ModelKind::Csdnn),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

/// Builds and trains `kind` with the given architecture. CSDNN always uses a
/// sigmoid trunk; the other two use `spec.activation`.
pub fn fit(
    kind: ModelKind,
    spec: &NetworkSpec,
    train_set: &CostSensitiveDataset,
    config: &TrainConfig,
) -> Result<(AuxNet, RunMetrics)> {
    match kind {
        ModelKind::AuxDnn => {
            let mut net = build_auxdnn(&spec.clone().with_aux(true), config.seed)?;
            let metrics = train(&mut net, train_set, config)?;
            Ok((net, metrics))
        }
        ModelKind::NaiveDnn => {
            let mut net = build_naivednn(spec, config.seed)?;
            let metrics = train(&mut net, train_set, config)?;
            Ok((net, metrics))
        }
        ModelKind::Csdnn => {
            let spec = spec.clone().with_aux(false).with_activation(Activation::Sigmoid);
            train_csdnn(&spec, train_set, config)
        }
    }
}

/// Predicts on `test` and records the report in `metrics`.
pub fn evaluate_into(
    net: &AuxNet,
    test: &CostSensitiveDataset,
    metrics: &mut RunMetrics,
) -> Result<crate::costs::EvalReport> {
    let report = evaluate(&predict(net, test.inputs())?, test)?;
    metrics.eval = Some(report.clone());
    Ok(report)
}
