//! Cost-sensitive deep networks with layer-wise auxiliary cost-estimation heads.
//!
//! The crate provides a small dense-network engine ([`nncore`]), cost
//! generation and evaluation ([`costs`]), the one-sided regression losses
//! ([`losses`]), the AuxDNN / NaiveDNN / CSDNN models and their trainers
//! ([`models`]), and dataset handling ([`data`]).
//!
//! ```
//! use auxit::costs::{cast_matrix_to_vectors, evaluate, randomized_proportional};
//! use auxit::data::{scale_unit, synth_blobs};
//! use auxit::models::{build_auxdnn, predict, train, NetworkSpec, TrainConfig};
//! use auxit::nncore::Activation;
//!
//! # fn main() -> auxit::Result<()> {
//! let (train_raw, test_raw) = synth_blobs(5, 10, &[100; 5], 0.3, 7)?;
//! let (train_set, test_set) = scale_unit(&train_raw, &test_raw)?;
//! let costs = randomized_proportional(&train_set, 7)?;
//! let train_cs = cast_matrix_to_vectors(&train_set, &costs)?;
//! let test_cs = cast_matrix_to_vectors(&test_set, &costs)?;
//!
//! let spec = NetworkSpec::uniform(10, 3, 32, Activation::Relu, 5);
//! let mut net = build_auxdnn(&spec, 1)?;
//! train(&mut net, &train_cs, &TrainConfig::default())?;
//! let report = evaluate(&predict(&net, test_cs.inputs())?, &test_cs)?;
//! assert!(report.average_cost.is_finite());
//! # Ok(())
//! # }
//! ```

pub mod costs;
pub mod data;
mod error;
pub mod losses;
pub mod models;
pub mod nncore;
pub mod rng;
pub mod tensor_io;

pub use error::{Error, Result};
