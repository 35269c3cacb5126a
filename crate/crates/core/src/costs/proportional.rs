//! Randomized proportional cost generation.
//!
//! Off-diagonal entries are drawn as `C(y, k) ~ U[0, 10·nₖ/n_y]` where `n_c` is
//! the number of examples of class `c`, so misclassifying a minority class is
//! more expensive in expectation.

use rand::Rng;

use super::CostMatrix;
use crate::data::Dataset;
use crate::rng::seeded_rng;
use crate::{Error, Result};

/// Scale of the proportional bound.
pub const PROPORTIONAL_SCALE: f64 = 10.0;

/// Upper bound of the sampling interval for entry `(y, k)`.
pub fn proportional_bound(counts: &[usize], y: usize, k: usize) -> f64 {
    PROPORTIONAL_SCALE * counts[k] as f64 / counts[y] as f64
}

pub fn randomized_proportional(dataset: &Dataset, seed: u64) -> Result<CostMatrix> {
    randomized_proportional_from_counts(&dataset.class_counts(), seed)
}

pub fn randomized_proportional_from_counts(counts: &[usize], seed: u64) -> Result<CostMatrix> {
    if let Some(class) = counts.iter().position(|&c| c == 0) {
        return Err(Error::EmptyClass { class });
    }
    let k = counts.len();
    let mut rng = seeded_rng(seed);
    let mut entries = vec![0.0; k * k];
    for y in 0..k {
        for c in 0..k {
            if y != c {
                entries[y * k + c] = rng.random::<f64>() * proportional_bound(counts, y, c);
            }
        }
    }
    CostMatrix::new(k, entries)
}
