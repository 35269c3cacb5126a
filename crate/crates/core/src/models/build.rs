use super::NetworkSpec;
use crate::nncore::AuxNet;
use crate::{Error, Result};

/// Network with a `K`-neuron regression head on every hidden layer but the
/// last, and a `K`-neuron regression output in place of the softmax.
pub fn build_auxdnn(spec: &NetworkSpec, seed: u64) -> Result<AuxNet> {
    if !spec.aux_enabled {
        return Err(Error::InvalidSpec("aux heads must be enabled for AuxDNN".into()));
    }
    AuxNet::init(spec, seed)
}

/// Same trunk and main head as [`build_auxdnn`] for the same seed, no aux heads.
pub fn build_naivednn(spec: &NetworkSpec, seed: u64) -> Result<AuxNet> {
    AuxNet::init(&spec.clone().with_aux(false), seed)
}
