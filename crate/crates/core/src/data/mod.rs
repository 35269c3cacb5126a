//! Datasets, loaders, scaling and synthetic data.

mod cache;
mod csv_io;
mod dataset;
mod idx;
mod imbalance;
mod scale;
mod synth;

pub use cache::{load_dataset, save_dataset, DATASET_MAGIC};
pub use csv_io::{load_csv, parse_csv, write_csv};
pub use dataset::{CostSensitiveDataset, Dataset, Scaling, Split};
pub(crate) use dataset::validate_cost_rows;
pub use idx::{load_idx, parse_idx, IDX_IMAGES_MAGIC, IDX_LABELS_MAGIC};
pub use imbalance::{imbalanced_classes, make_imbalanced};
pub use scale::{apply_scaling, fit_scaling, scale_unit};
pub use synth::synth_blobs;
