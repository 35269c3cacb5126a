//! Model checkpoints: a tensor container with every parameter tensor in the
//! canonical order (trunk, main head, aux heads; weights then bias as a
//! `1 × out` row), plus a JSON sidecar holding the spec and training config.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{NetworkSpec, TrainConfig};
use crate::nncore::{Activation, AuxNet, DenseLayer, Matrix};
use crate::tensor_io::{read_tensors, write_tensors};
use crate::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"AUXITNET";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub spec: NetworkSpec,
    pub config: TrainConfig,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

pub fn save_checkpoint(net: &AuxNet, config: &TrainConfig, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let biases: Vec<Matrix> = net
        .layers()
        .map(|l| Matrix::from_vec(1, l.bias.len(), l.bias.clone()))
        .collect::<Result<_>>()?;
    let mut tensors = Vec::with_capacity(biases.len() * 2);
    for (layer, bias) in net.layers().zip(&biases) {
        tensors.push(&layer.weights);
        tensors.push(bias);
    }
    write_tensors(BufWriter::new(File::create(path)?), CHECKPOINT_MAGIC, &tensors)?;
    let sidecar = Sidecar {
        spec: net.spec().clone(),
        config: config.clone(),
    };
    std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&sidecar)? + "\n")?;
    Ok(())
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<(AuxNet, TrainConfig)> {
    let path = path.as_ref();
    let sidecar: Sidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path(path))?)?;
    let tensors = read_tensors(BufReader::new(File::open(path)?), CHECKPOINT_MAGIC)?;
    let spec = sidecar.spec;
    spec.validate()?;
    let aux_count = if spec.aux_enabled { spec.depth() - 1 } else { 0 };
    let expected = 2 * (spec.depth() + 1 + aux_count);
    if tensors.len() != expected {
        return Err(Error::Format(format!(
            "checkpoint holds {} tensors, spec needs {expected}",
            tensors.len()
        )));
    }
    let mut it = tensors.into_iter();
    let mut next_layer = |activation| -> Result<DenseLayer> {
        let weights = it.next().expect("counted");
        let bias = it.next().expect("counted");
        if bias.rows() != 1 {
            return Err(Error::Format(format!("bias tensor has shape {:?}", bias.shape())));
        }
        DenseLayer::new(weights, bias.into_vec(), activation)
    };
    let trunk = (0..spec.depth())
        .map(|_| next_layer(spec.activation))
        .collect::<Result<Vec<_>>>()?;
    let main = next_layer(Activation::Identity)?;
    let aux = (0..aux_count)
        .map(|_| next_layer(Activation::Identity))
        .collect::<Result<Vec<_>>>()?;
    Ok((AuxNet::from_parts(spec, trunk, main, aux)?, sidecar.config))
}
