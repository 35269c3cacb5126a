use std::path::Path;

use auxit::costs::{randomized_proportional, tree_distance_costs, CostMatrix, HierarchyTree};
use serde::{Deserialize, Serialize};

use crate::data::{load_raw, DataOptions};
use crate::Result;

/// Off-diagonal summary of a generated cost matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSummary {
    pub classes: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl CostSummary {
    pub fn of(matrix: &CostMatrix) -> Self {
        let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for v in matrix.off_diagonal() {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            n += 1;
        }
        if n == 0 {
            (min, max) = (0.0, 0.0);
        }
        Self {
            classes: matrix.classes(),
            min,
            max,
            mean: if n == 0 { 0.0 } else { sum / n as f64 },
        }
    }
}

pub enum CostSource<'a> {
    /// Randomized proportional costs from the training split's class counts.
    Proportional { data: &'a DataOptions, seed: u64 },
    Tree { path: &'a Path },
}

pub fn gen_costs(source: CostSource<'_>, out: impl AsRef<Path>) -> Result<(CostMatrix, CostSummary)> {
    let matrix = match source {
        CostSource::Proportional { data, seed } => {
            let (train, _) = load_raw(data)?;
            let train = match &data.imbalance {
                Some(im) => auxit::data::make_imbalanced(&train, im.class_fraction, im.removal_fraction, data.data_seed)?,
                None => train,
            };
            randomized_proportional(&train, seed)?
        }
        CostSource::Tree { path } => tree_distance_costs(&HierarchyTree::read_csv(path)?)?,
    };
    matrix.write_csv(out)?;
    let summary = CostSummary::of(&matrix);
    Ok((matrix, summary))
}
