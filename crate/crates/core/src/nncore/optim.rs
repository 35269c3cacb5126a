use super::network::{AuxNet, GradientSet};
use crate::{Error, Result};

/// Momentum SGD: `v ← momentum·v − lr·g`, then `θ ← θ + v`.
pub fn sgd_step(
    net: &mut AuxNet,
    grads: &GradientSet,
    lr: f64,
    momentum: f64,
    velocity: &mut GradientSet,
) -> Result<()> {
    if !(lr > 0.0 && lr.is_finite()) {
        return Err(Error::InvalidLearningRate(lr));
    }
    if !(0.0..1.0).contains(&momentum) {
        return Err(Error::InvalidMomentum(momentum));
    }
    if !grads.matches(net) || !velocity.matches(net) {
        return Err(Error::InvalidSpec(
            "gradient or velocity shapes do not match the network".into(),
        ));
    }
    for ((layer, g), v) in net.layers_mut().zip(grads.layers()).zip(velocity.layers_mut()) {
        update(
            layer.weights.as_mut_slice(),
            g.weights.as_slice(),
            v.weights.as_mut_slice(),
            lr,
            momentum,
        );
        update(&mut layer.bias, &g.bias, &mut v.bias, lr, momentum);
    }
    Ok(())
}

#[inline]
fn update(params: &mut [f64], grads: &[f64], velocity: &mut [f64], lr: f64, momentum: f64) {
    for ((p, g), v) in params.iter_mut().zip(grads).zip(velocity.iter_mut()) {
        *v = momentum * *v - lr * g;
        *p += *v;
    }
}
