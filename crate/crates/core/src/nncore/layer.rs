//! Fully-connected layers.
//!
//! A [`DenseLayer`] computes `activation(x · Wᵀ + b)` for a batch `x` of shape
//! `batch × in`, with `W` stored as `out × in`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Sigmoid,
    Relu,
    /// Only used for regression heads.
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Sigmoid => sigmoid(z),
            Activation::Relu => z.max(0.0),
            Activation::Identity => z,
        }
    }

    /// Derivative with respect to the pre-activation, given both the
    /// pre-activation `z` and the output `a = apply(z)`.
    ///
    /// The ReLU subgradient at 0 is 0.
    #[inline]
    pub fn derivative(self, z: f64, a: f64) -> f64 {
        match self {
            Activation::Sigmoid => a * (1.0 - a),
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Identity => 1.0,
        }
    }
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

/// Pre- and post-activation outputs of one layer for one batch.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerOutput {
    pub pre: Matrix,
    pub post: Matrix,
}

/// Gradients of one dense layer's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl LayerGrad {
    pub fn zeros_like(layer: &DenseLayer) -> Self {
        Self {
            weights: Matrix::zeros(layer.weights.rows(), layer.weights.cols()),
            bias: vec![0.0; layer.bias.len()],
        }
    }
}

impl DenseLayer {
    pub fn new(weights: Matrix, bias: Vec<f64>, activation: Activation) -> Result<Self> {
        if bias.len() != weights.rows() {
            return Err(Error::LengthMismatch {
                what: "layer bias",
                expected: weights.rows(),
                got: bias.len(),
            });
        }
        Ok(Self {
            weights,
            bias,
            activation,
        })
    }

    /// Uniform fan-in/fan-out initialization with zero biases.
    pub fn init<R: Rng + ?Sized>(
        input: usize,
        output: usize,
        activation: Activation,
        rng: &mut R,
    ) -> Self {
        let limit = init_bound(input, output);
        let data = (0..input * output)
            .map(|_| rng.random_range(-limit..=limit))
            .collect();
        Self {
            weights: Matrix::from_vec(output, input, data).expect("sized above"),
            bias: vec![0.0; output],
            activation,
        }
    }

    #[inline]
    pub fn input_dim(&self) -> usize {
        self.weights.cols()
    }

    #[inline]
    pub fn output_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn param_count(&self) -> usize {
        self.weights.rows() * self.weights.cols() + self.bias.len()
    }

    pub fn forward(&self, input: &Matrix) -> Result<Matrix> {
        Ok(self.forward_traced(input)?.post)
    }

    pub fn forward_traced(&self, input: &Matrix) -> Result<LayerOutput> {
        if input.cols() != self.input_dim() {
            return Err(Error::ShapeMismatch {
                op: "dense_forward",
                left: input.shape(),
                right: self.weights.shape(),
            });
        }
        let mut pre = input.matmul_transposed(&self.weights)?;
        for r in 0..pre.rows() {
            for (z, b) in pre.row_mut(r).iter_mut().zip(&self.bias) {
                *z += b;
            }
        }
        let mut post = pre.clone();
        if self.activation != Activation::Identity {
            for a in post.as_mut_slice() {
                *a = self.activation.apply(*a);
            }
        }
        Ok(LayerOutput { pre, post })
    }

    /// Back-propagates `d_post` (gradient w.r.t. this layer's output) through
    /// the layer. Returns the parameter gradients and, when `need_input_grad`
    /// is set, the gradient w.r.t. the layer input.
    pub fn backward(
        &self,
        input: &Matrix,
        out: &LayerOutput,
        d_post: &Matrix,
        need_input_grad: bool,
    ) -> Result<(LayerGrad, Option<Matrix>)> {
        if d_post.shape() != out.post.shape() {
            return Err(Error::ShapeMismatch {
                op: "dense_backward",
                left: d_post.shape(),
                right: out.post.shape(),
            });
        }
        let mut d_pre = d_post.clone();
        if self.activation != Activation::Identity {
            for ((g, &z), &a) in d_pre
                .as_mut_slice()
                .iter_mut()
                .zip(out.pre.as_slice())
                .zip(out.post.as_slice())
            {
                *g *= self.activation.derivative(z, a);
            }
        }
        let weights = d_pre.transposed_matmul(input)?;
        let bias = d_pre.column_sums();
        let d_input = if need_input_grad {
            Some(d_pre.matmul(&self.weights)?)
        } else {
            None
        };
        Ok((LayerGrad { weights, bias }, d_input))
    }
}

/// `√(6 / (fan_in + fan_out))`.
pub fn init_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    #[test]
    fn identity_layer_passes_input_through() {
        let layer = DenseLayer::new(
            Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap(),
            vec![0.0, 0.0],
            Activation::Identity,
        )
        .unwrap();
        let x = Matrix::from_rows(&[[1.0, 2.0]]).unwrap();
        assert_eq!(layer.forward(&x).unwrap(), x);
    }

    #[test]
    fn relu_clamps_negative_preactivation() {
        let layer = DenseLayer::new(
            Matrix::from_rows(&[[1.0, 1.0]]).unwrap(),
            vec![-3.0],
            Activation::Relu,
        )
        .unwrap();
        let x = Matrix::from_rows(&[[1.0, 1.0]]).unwrap();
        assert_eq!(layer.forward(&x).unwrap().as_slice(), &[0.0]);
    }

    #[test]
    fn sigmoid_outputs_in_open_unit_interval() {
        let mut rng = seeded_rng(3);
        let layer = DenseLayer::init(4, 3, Activation::Sigmoid, &mut rng);
        let x = Matrix::from_rows(&[[0.5, -2.0, 3.0, 1.0], [10.0, -10.0, 0.0, 0.1]]).unwrap();
        let y = layer.forward(&x).unwrap();
        assert_eq!(y.shape(), (2, 3));
        for &v in y.as_slice() {
            assert!(v > 0.0 && v < 1.0, "{v}");
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let layer = DenseLayer::init(4, 3, Activation::Relu, &mut seeded_rng(0));
        let err = layer.forward(&Matrix::zeros(2, 5)).unwrap_err();
        match err {
            Error::ShapeMismatch { left, right, .. } => {
                assert_eq!(left, (2, 5));
                assert_eq!(right, (3, 4));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn sigmoid_is_stable_for_large_inputs() {
        assert_eq!(sigmoid(1000.0), 1.0);
        assert_eq!(sigmoid(-1000.0), 0.0);
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn relu_subgradient_at_zero_is_zero() {
        assert_eq!(Activation::Relu.derivative(0.0, 0.0), 0.0);
    }

    #[test]
    fn init_respects_bound() {
        let layer = DenseLayer::init(30, 20, Activation::Relu, &mut seeded_rng(11));
        let bound = init_bound(30, 20);
        assert!(layer.weights.as_slice().iter().all(|w| w.abs() <= bound));
        assert!(layer.bias.iter().all(|&b| b == 0.0));
    }
}
