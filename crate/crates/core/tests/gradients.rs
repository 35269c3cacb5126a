mod support;

use auxit::losses::{auxit_objective, cross_entropy_reconstruction, osr_loss, MixtureWeights};
use auxit::models::NetworkSpec;
use auxit::nncore::{Activation, AuxNet, GradientSet, Matrix};
use auxit::rng::seeded_rng;
use rand::Rng;
use support::{grad_check, random_problem, Problem};

#[test]
fn small_relu_net_matches_finite_differences() {
    let mut rng = seeded_rng(7);
    let spec = NetworkSpec::uniform(3, 2, 4, Activation::Relu, 2);
    let net = AuxNet::init(&spec, 1).unwrap();
    let x = Matrix::from_vec(4, 3, (0..12).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
    let p = Problem {
        net,
        x,
        costs: Matrix::from_rows(&[[0.0, 1.5], [0.7, 0.0], [0.0, 0.3], [2.0, 0.0]]).unwrap(),
        labels: vec![0, 1, 0, 1],
        weights: MixtureWeights::uniform(0.4, 1).unwrap(),
    };
    let r = grad_check(&p, 1e-5, 1e-6);
    assert!(r.checked > 0);
    assert!(r.worst < 1e-4, "{r:?}");
}

#[test]
fn random_sigmoid_and_relu_nets() {
    let mut rng = seeded_rng(2024);
    let mut totals = [(0, 0); 2];
    for i in 0..40 {
        let (act, tol, slot) = if i % 2 == 0 {
            (Activation::Sigmoid, 1e-4, 0)
        } else {
            (Activation::Relu, 1e-3, 1)
        };
        let p = random_problem(&mut rng, act);
        let r = grad_check(&p, 1e-5, 1e-6);
        assert!(r.worst < tol, "net {i} ({act:?}): {r:?}");
        totals[slot].0 += r.checked;
        totals[slot].1 += r.excluded;
    }
    for (checked, excluded) in totals {
        assert!(checked > 4 * excluded, "too many excluded: {checked} checked, {excluded} excluded");
    }
}

#[test]
fn backward_shapes_match_parameters() {
    let mut rng = seeded_rng(3);
    for _ in 0..20 {
        let p = random_problem(&mut rng, Activation::Relu);
        let trace = p.net.forward(&p.x).unwrap();
        let obj = auxit_objective(&trace, &p.costs, &p.labels, &p.weights).unwrap();
        let g = p.net.backward(&trace, &obj.head_grads()).unwrap();
        assert!(g.matches(&p.net));
        assert_eq!(g.flatten().len(), p.net.param_count());
        assert_eq!(p.net.param_count(), p.net.spec().param_count());
    }
}

#[test]
fn zero_alpha_gives_exactly_zero_aux_gradients() {
    let mut rng = seeded_rng(5);
    let mut p = random_problem(&mut rng, Activation::Sigmoid);
    while p.net.aux_heads().is_empty() {
        p = random_problem(&mut rng, Activation::Sigmoid);
    }
    p.weights = MixtureWeights::uniform(0.0, p.net.aux_heads().len()).unwrap();
    let trace = p.net.forward(&p.x).unwrap();
    let obj = auxit_objective(&trace, &p.costs, &p.labels, &p.weights).unwrap();
    let g = p.net.backward(&trace, &obj.head_grads()).unwrap();
    assert!(g.aux.iter().all(|l| l.weights.is_zero() && l.bias.iter().all(|&b| b == 0.0)));
    let naive = p.net.without_aux_heads();
    let trace = naive.forward(&p.x).unwrap();
    let none = MixtureWeights::new(vec![]).unwrap();
    let obj = auxit_objective(&trace, &p.costs, &p.labels, &none).unwrap();
    let gn: GradientSet = naive.backward(&trace, &obj.head_grads()).unwrap();
    assert_eq!(g.trunk, gn.trunk);
    assert_eq!(g.main, gn.main);
}

fn fd(f: impl Fn(&Matrix) -> f64, at: &Matrix, step: f64) -> Vec<f64> {
    (0..at.as_slice().len())
        .map(|i| {
            let mut a = at.clone();
            a.as_mut_slice()[i] += step;
            let mut b = at.clone();
            b.as_mut_slice()[i] -= step;
            (f(&a) - f(&b)) / (2.0 * step)
        })
        .collect()
}

#[test]
fn osr_gradient_away_from_hinges() {
    let mut rng = seeded_rng(11);
    for _ in 0..50 {
        let (b, k) = (rng.random_range(1..6), rng.random_range(2..5));
        let labels: Vec<usize> = (0..b).map(|_| rng.random_range(0..k)).collect();
        let mut costs = Matrix::zeros(b, k);
        for (n, &y) in labels.iter().enumerate() {
            for c in (0..k).filter(|&c| c != y) {
                costs.set(n, c, rng.random_range(0.0..3.0));
            }
        }
        let r = Matrix::from_vec(b, k, (0..b * k).map(|_| rng.random_range(-2.0..4.0)).collect()).unwrap();
        let near_hinge = (0..b * k).any(|i| (r.as_slice()[i] - costs.as_slice()[i]).abs() < 1e-4);
        if near_hinge {
            continue;
        }
        let analytic = osr_loss(&r, &costs, &labels).unwrap().grad;
        let numeric = fd(|m| osr_loss(m, &costs, &labels).unwrap().value, &r, 1e-6);
        for (a, n) in analytic.as_slice().iter().zip(&numeric) {
            assert!((a - n).abs() < 1e-6, "{a} vs {n}");
        }
    }
}

#[test]
fn cross_entropy_gradient() {
    let mut rng = seeded_rng(12);
    for _ in 0..50 {
        let (b, d) = (rng.random_range(1..5), rng.random_range(1..6));
        let recon = Matrix::from_vec(b, d, (0..b * d).map(|_| rng.random_range(0.05..0.95)).collect()).unwrap();
        let target = Matrix::from_vec(b, d, (0..b * d).map(|_| rng.random::<f64>()).collect()).unwrap();
        let analytic = cross_entropy_reconstruction(&recon, &target).unwrap().grad;
        let numeric = fd(|m| cross_entropy_reconstruction(m, &target).unwrap().value, &recon, 1e-6);
        for (a, n) in analytic.as_slice().iter().zip(&numeric) {
            assert!((a - n).abs() < 1e-6, "{a} vs {n}");
        }
    }
}
