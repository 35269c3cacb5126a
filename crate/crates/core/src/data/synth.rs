use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::StandardNormal;

use super::{Dataset, Split};
use crate::nncore::Matrix;
use crate::rng::seeded_rng;
use crate::{Error, Result};

/// Isotropic Gaussian clusters around centers drawn uniformly from `[0, 1]^D`.
///
/// Each class contributes `per_class_counts[k]` points, split 80/20 into train
/// and test (at least one point in each). Each split is returned in a seeded
/// random order, so truncating it keeps the class mix.
pub fn synth_blobs(
    classes: usize,
    dim: usize,
    per_class_counts: &[usize],
    spread: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if classes == 0 || dim == 0 {
        return Err(Error::InvalidCounts(format!(
            "need K ≥ 1 and D ≥ 1, got K={classes}, D={dim}"
        )));
    }
    if per_class_counts.len() != classes {
        return Err(Error::LengthMismatch {
            what: "per-class counts",
            expected: classes,
            got: per_class_counts.len(),
        });
    }
    if let Some(k) = per_class_counts.iter().position(|&c| c < 2) {
        return Err(Error::InvalidCounts(format!(
            "class {k} has {} examples; at least 2 are needed",
            per_class_counts[k]
        )));
    }
    if !(spread >= 0.0 && spread.is_finite()) {
        return Err(Error::InvalidCounts(format!("spread must be finite and ≥ 0, got {spread}")));
    }

    let mut rng = seeded_rng(seed);
    let centers: Vec<Vec<f64>> = (0..classes)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();

    let mut train = (Vec::new(), Vec::new());
    let mut test = (Vec::new(), Vec::new());
    for (k, &count) in per_class_counts.iter().enumerate() {
        let n_train = train_count(count);
        for i in 0..count {
            let target = if i < n_train { &mut train } else { &mut test };
            for &c in &centers[k] {
                let z: f64 = rng.sample(StandardNormal);
                target.0.push(c + spread * z);
            }
            target.1.push(k);
        }
    }
    let mut build = |(x, y): (Vec<f64>, Vec<usize>), split| {
        let n = y.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        Ok::<_, Error>(Dataset::new(Matrix::from_vec(n, dim, x)?, y, classes, split)?.subset(&order))
    };
    let train = build(train, Split::Train)?;
    let test = build(test, Split::Test)?;
    Ok((train, test))
}

fn train_count(count: usize) -> usize {
    (count * 4).div_ceil(5).min(count - 1)
}
