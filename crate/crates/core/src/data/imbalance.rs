use rand::seq::index::sample;

use super::Dataset;
use crate::rng::derived_rng;
use crate::{Error, Result};

const IMBALANCE_STREAM: u64 = 300;

/// Picks `⌈class_fraction·K⌉` classes and drops `⌊removal_fraction·count⌋`
/// examples from each, uniformly at random. Surviving examples keep their
/// original order. The class choice depends only on `seed` and `K`, so two
/// splits of one dataset reduced with the same seed lose the same classes.
pub fn make_imbalanced(
    dataset: &Dataset,
    class_fraction: f64,
    removal_fraction: f64,
    seed: u64,
) -> Result<Dataset> {
    check_fraction("class_fraction", class_fraction)?;
    check_fraction("removal_fraction", removal_fraction)?;
    let mut rng = derived_rng(seed, IMBALANCE_STREAM);
    let chosen = reduced_classes(dataset.classes, class_fraction, &mut rng);
    let counts = dataset.class_counts();
    let mut keep = vec![true; dataset.len()];
    for &class in &chosen {
        let members: Vec<usize> = (0..dataset.len())
            .filter(|&n| dataset.labels[n] == class)
            .collect();
        let remove = floor_fraction(removal_fraction, members.len());
        for i in sample(&mut rng, members.len(), remove) {
            keep[members[i]] = false;
        }
        if counts[class] > 0 && remove == counts[class] {
            return Err(Error::EmptyClass { class });
        }
    }
    let indices: Vec<usize> = (0..dataset.len()).filter(|&n| keep[n]).collect();
    Ok(dataset.subset(&indices))
}

/// The classes [`make_imbalanced`] reduces for this seed, ascending.
pub fn imbalanced_classes(classes: usize, class_fraction: f64, seed: u64) -> Result<Vec<usize>> {
    check_fraction("class_fraction", class_fraction)?;
    let mut rng = derived_rng(seed, IMBALANCE_STREAM);
    Ok(reduced_classes(classes, class_fraction, &mut rng))
}

fn reduced_classes(classes: usize, fraction: f64, rng: &mut crate::rng::Rng) -> Vec<usize> {
    let m = ceil_fraction(fraction, classes);
    let mut chosen = sample(rng, classes, m).into_vec();
    chosen.sort_unstable();
    chosen
}

fn check_fraction(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidFraction { name, value })
    }
}

// 0.7·10 evaluates to 7.000000000000001; snap products within a few ulps of an
// integer before rounding.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

fn ceil_fraction(f: f64, n: usize) -> usize {
    (snap(f * n as f64).ceil() as usize).min(n)
}

fn floor_fraction(f: f64, n: usize) -> usize {
    (snap(f * n as f64).floor() as usize).min(n)
}
