use super::LossValue;
use crate::nncore::Matrix;
use crate::{Error, Result};

/// `−mean_n Σ_d [x_d·ln x̃_d + (1 − x_d)·ln(1 − x̃_d)]` with its gradient
/// w.r.t. the reconstruction `x̃`.
pub fn cross_entropy_reconstruction(reconstruction: &Matrix, target: &Matrix) -> Result<LossValue> {
    if reconstruction.shape() != target.shape() {
        return Err(Error::ShapeMismatch {
            op: "cross_entropy_reconstruction",
            left: reconstruction.shape(),
            right: target.shape(),
        });
    }
    let cols = reconstruction.cols().max(1);
    for (i, (&r, &t)) in reconstruction
        .as_slice()
        .iter()
        .zip(target.as_slice())
        .enumerate()
    {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::ReconstructionOutOfRange {
                row: i / cols,
                col: i % cols,
                value: r,
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TargetOutOfRange {
                row: i / cols,
                col: i % cols,
                value: t,
            });
        }
    }

    let inv = 1.0 / reconstruction.rows().max(1) as f64;
    let mut grad = Matrix::zeros(reconstruction.rows(), reconstruction.cols());
    let mut total = 0.0;
    for ((g, &r), &t) in grad
        .as_mut_slice()
        .iter_mut()
        .zip(reconstruction.as_slice())
        .zip(target.as_slice())
    {
        total -= t * r.ln() + (1.0 - t) * (-r).ln_1p();
        *g = (-t / r + (1.0 - t) / (1.0 - r)) * inv;
    }
    Ok(LossValue {
        value: total * inv,
        grad,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_point_is_four_ln_two() {
        let half = Matrix::from_rows(&[[0.5; 4]]).unwrap();
        let l = cross_entropy_reconstruction(&half, &half).unwrap();
        assert!((l.value - 4.0 * std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn near_perfect_reconstruction_of_zero_target() {
        let r = Matrix::from_rows(&[[1e-9]]).unwrap();
        let t = Matrix::from_rows(&[[0.0]]).unwrap();
        let l = cross_entropy_reconstruction(&r, &t).unwrap();
        assert!(l.value >= 0.0 && l.value < 1e-8, "{}", l.value);
    }

    #[test]
    fn boundary_reconstructions_rejected() {
        let t = Matrix::from_rows(&[[0.5, 0.5]]).unwrap();
        for bad in [0.0, 1.0] {
            let r = Matrix::from_rows(&[[0.5, bad]]).unwrap();
            assert!(matches!(
                cross_entropy_reconstruction(&r, &t),
                Err(Error::ReconstructionOutOfRange { row: 0, col: 1, .. })
            ));
        }
    }
}
