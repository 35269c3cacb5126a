//! Minimal deterministic fully-connected network engine: dense layers,
//! reverse-mode gradients and momentum SGD.

mod layer;
mod matrix;
mod network;
mod optim;

pub use layer::{init_bound, sigmoid, Activation, DenseLayer, LayerGrad, LayerOutput};
pub use matrix::Matrix;
pub use network::{AuxNet, ForwardTrace, GradientSet, HeadGrads};
pub use optim::sgd_step;
