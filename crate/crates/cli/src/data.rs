//! Dataset presets and the preparation pipeline shared by every verb.

use std::path::{Path, PathBuf};

use auxit::costs::{cast_matrix_to_vectors, randomized_proportional, CostMatrix};
use auxit::data::{load_csv, load_idx, make_imbalanced, scale_unit, synth_blobs, CostSensitiveDataset, Dataset, Split};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

pub const MNIST_TRAIN_IMAGES: &str = "train-images-idx3-ubyte";
pub const MNIST_TRAIN_LABELS: &str = "train-labels-idx1-ubyte";
pub const MNIST_TEST_IMAGES: &str = "t10k-images-idx3-ubyte";
pub const MNIST_TEST_LABELS: &str = "t10k-labels-idx1-ubyte";

/// Gaussian-blob problem used for quick desk-scale experiments.
///
/// The preset has many classes and high-dimensional inputs; combined with the
/// imbalanced variant and randomized proportional costs it is hard enough that
/// plain ReLU networks often lose most of their first-layer units in training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub classes: usize,
    pub dim: usize,
    pub per_class: usize,
    pub spread: f64,
}

impl SyntheticSpec {
    pub fn preset() -> Self {
        Self {
            classes: 20,
            dim: 100,
            per_class: 150,
            spread: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DataSource {
    Synthetic(SyntheticSpec),
    /// Directory holding the four MNIST IDX files under their usual names.
    Idx { dir: PathBuf },
    Csv { train: PathBuf, test: PathBuf, label_column: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Imbalance {
    pub class_fraction: f64,
    pub removal_fraction: f64,
}

impl Default for Imbalance {
    fn default() -> Self {
        Self {
            class_fraction: 0.4,
            removal_fraction: 0.7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataOptions {
    pub source: DataSource,
    /// Keep only the first `n` training / test examples.
    pub n_train: Option<usize>,
    pub n_test: Option<usize>,
    pub imbalance: Option<Imbalance>,
    /// Seeds data generation, imbalancing and cost generation.
    pub data_seed: u64,
    /// Fixed cost matrix instead of a randomized proportional one.
    pub cost_matrix: Option<PathBuf>,
}

impl DataOptions {
    /// The imbalanced synthetic problem used by the trend checks.
    pub fn synthetic_preset(data_seed: u64) -> Self {
        Self {
            source: DataSource::Synthetic(SyntheticSpec::preset()),
            n_train: None,
            n_test: None,
            imbalance: Some(Imbalance::default()),
            data_seed,
            cost_matrix: None,
        }
    }

    pub fn mnist(dir: impl Into<PathBuf>, data_seed: u64) -> Self {
        Self {
            source: DataSource::Idx { dir: dir.into() },
            n_train: Some(5000),
            n_test: Some(1000),
            imbalance: None,
            data_seed,
            cost_matrix: None,
        }
    }
}

/// Scaled train/test splits with per-example cost vectors.
#[derive(Debug, Clone)]
pub struct ExperimentData {
    pub train: CostSensitiveDataset,
    pub test: CostSensitiveDataset,
    pub costs: CostMatrix,
}

impl ExperimentData {
    pub fn input_dim(&self) -> usize {
        self.train.inputs().cols()
    }

    pub fn classes(&self) -> usize {
        self.train.classes()
    }
}

pub fn load_raw(options: &DataOptions) -> Result<(Dataset, Dataset)> {
    let (mut train, mut test) = match &options.source {
        DataSource::Synthetic(s) => synth_blobs(
            s.classes,
            s.dim,
            &vec![s.per_class; s.classes],
            s.spread,
            options.data_seed,
        )?,
        DataSource::Idx { dir } => (
            load_idx(dir.join(MNIST_TRAIN_IMAGES), dir.join(MNIST_TRAIN_LABELS), Split::Train)?,
            load_idx(dir.join(MNIST_TEST_IMAGES), dir.join(MNIST_TEST_LABELS), Split::Test)?,
        ),
        DataSource::Csv {
            train,
            test,
            label_column,
        } => (
            load_csv(train, *label_column, Split::Train)?,
            load_csv(test, *label_column, Split::Test)?,
        ),
    };
    if let Some(n) = options.n_train {
        train = train.truncate(n);
    }
    if let Some(n) = options.n_test {
        test = test.truncate(n);
    }
    // loaders infer K per split
    let k = train.classes.max(test.classes);
    Ok((train.with_classes(k)?, test.with_classes(k)?))
}

/// Load, optionally imbalance both splits, scale to the unit box using the
/// training split, then attach costs generated from the training split.
pub fn prepare(options: &DataOptions) -> Result<ExperimentData> {
    let (mut train, mut test) = load_raw(options)?;
    if let Some(im) = &options.imbalance {
        train = make_imbalanced(&train, im.class_fraction, im.removal_fraction, options.data_seed)?;
        test = make_imbalanced(&test, im.class_fraction, im.removal_fraction, options.data_seed)?;
    }
    let (train, test) = scale_unit(&train, &test)?;
    let costs = match &options.cost_matrix {
        Some(path) => read_cost_matrix(path)?,
        None => randomized_proportional(&train, options.data_seed)?,
    };
    Ok(ExperimentData {
        train: cast_matrix_to_vectors(&train, &costs)?,
        test: cast_matrix_to_vectors(&test, &costs)?,
        costs,
    })
}

fn read_cost_matrix(path: &Path) -> Result<CostMatrix> {
    CostMatrix::read_csv(path).map_err(|source| CliError::Run {
        context: format!("reading cost matrix {}", path.display()),
        source,
    })
}
