//! The auxiliary-head network: a fully-connected trunk of `H` hidden layers,
//! a `K`-neuron regression head on each of the first `H − 1` hidden layers,
//! and a `K`-neuron main regression head on the last one.

use serde::{Deserialize, Serialize};

use super::layer::{Activation, DenseLayer, LayerGrad, LayerOutput};
use super::Matrix;
use crate::models::NetworkSpec;
use crate::rng::seeded_rng;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxNet {
    spec: NetworkSpec,
    trunk: Vec<DenseLayer>,
    main_head: DenseLayer,
    /// `aux_heads[i]` reads hidden layer `i` (0-based).
    aux_heads: Vec<DenseLayer>,
}

/// Everything the backward pass needs from one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub input: Matrix,
    pub trunk: Vec<LayerOutput>,
    pub aux: Vec<LayerOutput>,
    pub main: LayerOutput,
}

impl ForwardTrace {
    pub fn aux_outputs(&self) -> impl Iterator<Item = &Matrix> {
        self.aux.iter().map(|o| &o.post)
    }

    pub fn main_output(&self) -> &Matrix {
        &self.main.post
    }

    pub fn batch_size(&self) -> usize {
        self.input.rows()
    }
}

/// Gradient of the scalar objective w.r.t. each head's output.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadGrads {
    pub aux: Vec<Matrix>,
    pub main: Matrix,
}

/// One gradient tensor per parameter tensor, laid out like [`AuxNet`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSet {
    pub trunk: Vec<LayerGrad>,
    pub main: LayerGrad,
    pub aux: Vec<LayerGrad>,
}

impl GradientSet {
    pub fn zeros_like(net: &AuxNet) -> Self {
        Self {
            trunk: net.trunk.iter().map(LayerGrad::zeros_like).collect(),
            main: LayerGrad::zeros_like(&net.main_head),
            aux: net.aux_heads.iter().map(LayerGrad::zeros_like).collect(),
        }
    }

    /// Layers in the canonical order: trunk, main head, aux heads.
    pub fn layers(&self) -> impl Iterator<Item = &LayerGrad> {
        self.trunk
            .iter()
            .chain(std::iter::once(&self.main))
            .chain(self.aux.iter())
    }

    pub fn layers_mut(&mut self) -> impl Iterator<Item = &mut LayerGrad> {
        self.trunk
            .iter_mut()
            .chain(std::iter::once(&mut self.main))
            .chain(self.aux.iter_mut())
    }

    /// Flattens in the same order as [`AuxNet::parameters`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for g in self.layers() {
            out.extend_from_slice(g.weights.as_slice());
            out.extend_from_slice(&g.bias);
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.layers()
            .all(|g| g.weights.is_finite() && g.bias.iter().all(|b| b.is_finite()))
    }

    pub fn is_zero(&self) -> bool {
        self.layers()
            .all(|g| g.weights.is_zero() && g.bias.iter().all(|&b| b == 0.0))
    }

    /// True when every tensor matches the shape of the corresponding parameter.
    pub fn matches(&self, net: &AuxNet) -> bool {
        self.trunk.len() == net.trunk.len()
            && self.aux.len() == net.aux_heads.len()
            && self.layers().zip(net.layers()).all(|(g, l)| {
                g.weights.shape() == l.weights.shape() && g.bias.len() == l.bias.len()
            })
    }
}

impl AuxNet {
    /// Draws every weight uniformly from `±√(6/(fan_in+fan_out))` with zero
    /// biases. Trunk layers are drawn first, then the main head, then the aux
    /// heads, so two specs differing only in `aux_enabled` share trunk and
    /// main-head parameters for the same seed.
    pub fn init(spec: &NetworkSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let mut rng = seeded_rng(seed);
        let mut trunk = Vec::with_capacity(spec.depth());
        let mut fan_in = spec.input_dim;
        for &width in &spec.hidden_widths {
            trunk.push(DenseLayer::init(fan_in, width, spec.activation, &mut rng));
            fan_in = width;
        }
        let main_head = DenseLayer::init(fan_in, spec.classes, Activation::Identity, &mut rng);
        let aux_heads = if spec.aux_enabled {
            spec.hidden_widths[..spec.depth() - 1]
                .iter()
                .map(|&w| DenseLayer::init(w, spec.classes, Activation::Identity, &mut rng))
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            spec: spec.clone(),
            trunk,
            main_head,
            aux_heads,
        })
    }

    /// Assembles a network from explicit layers, checking that they chain.
    pub fn from_parts(
        spec: NetworkSpec,
        trunk: Vec<DenseLayer>,
        main_head: DenseLayer,
        aux_heads: Vec<DenseLayer>,
    ) -> Result<Self> {
        spec.validate()?;
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if trunk.len() != spec.depth() {
            return bad(format!("expected {} trunk layers, got {}", spec.depth(), trunk.len()));
        }
        let mut fan_in = spec.input_dim;
        for (i, (layer, &w)) in trunk.iter().zip(&spec.hidden_widths).enumerate() {
            if layer.weights.shape() != (w, fan_in) || layer.bias.len() != w {
                return bad(format!("trunk layer {i} has shape {:?}", layer.weights.shape()));
            }
            fan_in = w;
        }
        if main_head.weights.shape() != (spec.classes, fan_in) {
            return bad(format!("main head has shape {:?}", main_head.weights.shape()));
        }
        let expected_aux = if spec.aux_enabled { spec.depth() - 1 } else { 0 };
        if aux_heads.len() != expected_aux {
            return bad(format!("expected {expected_aux} aux heads, got {}", aux_heads.len()));
        }
        for (i, head) in aux_heads.iter().enumerate() {
            if head.weights.shape() != (spec.classes, spec.hidden_widths[i]) {
                return bad(format!("aux head {} has shape {:?}", i + 1, head.weights.shape()));
            }
        }
        Ok(Self {
            spec,
            trunk,
            main_head,
            aux_heads,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn trunk(&self) -> &[DenseLayer] {
        &self.trunk
    }

    pub fn trunk_mut(&mut self) -> &mut [DenseLayer] {
        &mut self.trunk
    }

    pub fn main_head(&self) -> &DenseLayer {
        &self.main_head
    }

    pub fn aux_heads(&self) -> &[DenseLayer] {
        &self.aux_heads
    }

    pub fn depth(&self) -> usize {
        self.trunk.len()
    }

    pub fn input_dim(&self) -> usize {
        self.spec.input_dim
    }

    pub fn classes(&self) -> usize {
        self.spec.classes
    }

    /// The same network with every aux head removed.
    pub fn without_aux_heads(&self) -> Self {
        let mut spec = self.spec.clone();
        spec.aux_enabled = false;
        Self {
            spec,
            trunk: self.trunk.clone(),
            main_head: self.main_head.clone(),
            aux_heads: Vec::new(),
        }
    }

    /// Layers in the canonical order: trunk, main head, aux heads.
    pub fn layers(&self) -> impl Iterator<Item = &DenseLayer> {
        self.trunk
            .iter()
            .chain(std::iter::once(&self.main_head))
            .chain(self.aux_heads.iter())
    }

    pub fn layers_mut(&mut self) -> impl Iterator<Item = &mut DenseLayer> {
        self.trunk
            .iter_mut()
            .chain(std::iter::once(&mut self.main_head))
            .chain(self.aux_heads.iter_mut())
    }

    pub fn param_count(&self) -> usize {
        self.layers().map(DenseLayer::param_count).sum()
    }

    /// All parameters flattened: per layer, weights row-major then bias.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in self.layers() {
            out.extend_from_slice(l.weights.as_slice());
            out.extend_from_slice(&l.bias);
        }
        out
    }

    pub fn set_parameters(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::LengthMismatch {
                what: "parameter vector",
                expected: self.param_count(),
                got: params.len(),
            });
        }
        let mut rest = params;
        for l in self.layers_mut() {
            let (w, tail) = rest.split_at(l.weights.as_slice().len());
            l.weights.as_mut_slice().copy_from_slice(w);
            let (b, tail) = tail.split_at(l.bias.len());
            l.bias.copy_from_slice(b);
            rest = tail;
        }
        Ok(())
    }

    pub fn forward(&self, batch: &Matrix) -> Result<ForwardTrace> {
        if batch.cols() != self.input_dim() {
            return Err(Error::ShapeMismatch {
                op: "forward",
                left: batch.shape(),
                right: (batch.rows(), self.input_dim()),
            });
        }
        let mut trunk: Vec<LayerOutput> = Vec::with_capacity(self.depth());
        for layer in &self.trunk {
            let input = trunk.last().map_or(batch, |o| &o.post);
            let out = layer.forward_traced(input)?;
            trunk.push(out);
        }
        let aux = self
            .aux_heads
            .iter()
            .zip(&trunk)
            .map(|(head, hidden)| head.forward_traced(&hidden.post))
            .collect::<Result<Vec<_>>>()?;
        let last = &trunk.last().expect("depth >= 1").post;
        let main = self.main_head.forward_traced(last)?;
        Ok(ForwardTrace {
            input: batch.clone(),
            trunk,
            aux,
            main,
        })
    }

    /// Main-head output only; skips the aux heads.
    pub fn main_output(&self, batch: &Matrix) -> Result<Matrix> {
        self.hidden(batch, self.depth())
            .and_then(|h| self.main_head.forward(&h))
    }

    /// Activations of the first `layers` trunk layers (`layers = 0` returns
    /// the input).
    pub fn hidden(&self, batch: &Matrix, layers: usize) -> Result<Matrix> {
        if batch.cols() != self.input_dim() {
            return Err(Error::ShapeMismatch {
                op: "forward",
                left: batch.shape(),
                right: (batch.rows(), self.input_dim()),
            });
        }
        let mut h = batch.clone();
        for layer in &self.trunk[..layers.min(self.depth())] {
            h = layer.forward(&h)?;
        }
        Ok(h)
    }

    /// Reverse-mode gradients of the scalar objective whose partial
    /// derivatives w.r.t. the head outputs are `head_grads`.
    ///
    /// An all-zero head gradient contributes nothing and its branch is
    /// skipped entirely, so a zero-weighted aux head leaves the trunk
    /// gradients bit-identical to those of the detached network.
    pub fn backward(&self, trace: &ForwardTrace, head_grads: &HeadGrads) -> Result<GradientSet> {
        if trace.trunk.len() != self.depth() || trace.aux.len() != self.aux_heads.len() {
            return Err(Error::InvalidSpec(
                "forward trace does not belong to this network".into(),
            ));
        }
        if head_grads.aux.len() < self.aux_heads.len() {
            return Err(Error::MissingHeadGradient {
                head: format!("aux_{}", head_grads.aux.len() + 1),
            });
        }
        if head_grads.aux.len() > self.aux_heads.len() {
            return Err(Error::LengthMismatch {
                what: "aux head gradients",
                expected: self.aux_heads.len(),
                got: head_grads.aux.len(),
            });
        }
        for (g, out) in head_grads.aux.iter().zip(&trace.aux) {
            if g.shape() != out.post.shape() {
                return Err(Error::ShapeMismatch {
                    op: "backward (aux head gradient)",
                    left: g.shape(),
                    right: out.post.shape(),
                });
            }
        }
        if head_grads.main.shape() != trace.main.post.shape() {
            return Err(Error::ShapeMismatch {
                op: "backward (main head gradient)",
                left: head_grads.main.shape(),
                right: trace.main.post.shape(),
            });
        }

        let mut grads = GradientSet::zeros_like(self);
        let depth = self.depth();
        let last_hidden = &trace.trunk[depth - 1].post;
        let (main_grad, d_hidden) =
            self.main_head
                .backward(last_hidden, &trace.main, &head_grads.main, true)?;
        grads.main = main_grad;
        let mut d_post = d_hidden.expect("requested");

        for i in (0..depth).rev() {
            if let (Some(head), Some(g)) = (self.aux_heads.get(i), head_grads.aux.get(i)) {
                if !g.is_zero() {
                    let (head_grad, d_in) =
                        head.backward(&trace.trunk[i].post, &trace.aux[i], g, true)?;
                    d_post.add_assign(&d_in.expect("requested"))?;
                    grads.aux[i] = head_grad;
                }
            }
            let input = if i == 0 {
                &trace.input
            } else {
                &trace.trunk[i - 1].post
            };
            let (layer_grad, d_in) = self.trunk[i].backward(input, &trace.trunk[i], &d_post, i > 0)?;
            grads.trunk[i] = layer_grad;
            if let Some(d) = d_in {
                d_post = d;
            }
        }
        Ok(grads)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(depth: usize) -> NetworkSpec {
        NetworkSpec::uniform(3, depth, 4, Activation::Relu, 2)
    }

    #[test]
    fn trace_has_one_aux_output_per_non_final_hidden_layer() {
        for depth in 1..=4 {
            let net = AuxNet::init(&spec(depth), 1).unwrap();
            let x = Matrix::zeros(5, 3);
            let trace = net.forward(&x).unwrap();
            assert_eq!(trace.aux.len(), depth - 1);
            assert_eq!(trace.main_output().shape(), (5, 2));
            for out in trace.aux_outputs() {
                assert_eq!(out.shape(), (5, 2));
            }
            for t in &trace.trunk {
                assert_eq!(t.post.rows(), 5);
            }
        }
    }

    #[test]
    fn forward_rejects_wrong_input_width() {
        let net = AuxNet::init(&spec(2), 1).unwrap();
        assert!(matches!(
            net.forward(&Matrix::zeros(2, 4)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn zero_head_grads_give_zero_gradients() {
        let net = AuxNet::init(&spec(3), 9).unwrap();
        let x = Matrix::from_rows(&[[0.1, 0.5, 0.9], [0.3, 0.2, 0.7]]).unwrap();
        let trace = net.forward(&x).unwrap();
        let hg = HeadGrads {
            aux: vec![Matrix::zeros(2, 2); 2],
            main: Matrix::zeros(2, 2),
        };
        let g = net.backward(&trace, &hg).unwrap();
        assert!(g.is_zero());
        assert!(g.matches(&net));
    }

    #[test]
    fn missing_head_gradient_is_an_error() {
        let net = AuxNet::init(&spec(3), 9).unwrap();
        let trace = net.forward(&Matrix::zeros(2, 3)).unwrap();
        let hg = HeadGrads {
            aux: vec![Matrix::zeros(2, 2)],
            main: Matrix::zeros(2, 2),
        };
        assert!(matches!(
            net.backward(&trace, &hg),
            Err(Error::MissingHeadGradient { .. })
        ));
        let hg = HeadGrads {
            aux: vec![Matrix::zeros(2, 2); 2],
            main: Matrix::zeros(3, 2),
        };
        assert!(matches!(net.backward(&trace, &hg), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn init_is_deterministic_per_seed() {
        let a = AuxNet::init(&spec(3), 42).unwrap();
        let b = AuxNet::init(&spec(3), 42).unwrap();
        let c = AuxNet::init(&spec(3), 43).unwrap();
        assert_eq!(a.parameters(), b.parameters());
        assert_ne!(a.parameters(), c.parameters());
    }

    #[test]
    fn set_parameters_round_trips() {
        let mut net = AuxNet::init(&spec(2), 5).unwrap();
        let mut p = net.parameters();
        p[0] = 123.0;
        net.set_parameters(&p).unwrap();
        assert_eq!(net.parameters(), p);
        assert!(net.set_parameters(&p[1..]).is_err());
    }
}
