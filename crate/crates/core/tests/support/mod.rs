//! Independent oracles shared by integration and acceptance tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use auxit::losses::{auxit_objective, MixtureWeights};
use auxit::models::NetworkSpec;
use auxit::nncore::{Activation, AuxNet, Matrix};
use auxit::rng::Rng;
use rand::seq::SliceRandom;
use rand::Rng as _;

pub struct Problem {
    pub net: AuxNet,
    pub x: Matrix,
    pub costs: Matrix,
    pub labels: Vec<usize>,
    pub weights: MixtureWeights,
}

/// Random small network with a random batch and cost vectors.
pub fn random_problem(rng: &mut Rng, activation: Activation) -> Problem {
    let d = rng.random_range(1..=8);
    let h = rng.random_range(1..=3);
    let k = rng.random_range(2..=4);
    let widths: Vec<usize> = (0..h).map(|_| rng.random_range(1..=6)).collect();
    let spec = NetworkSpec {
        input_dim: d,
        hidden_widths: widths,
        activation,
        classes: k,
        aux_enabled: true,
    };
    let mut net = AuxNet::init(&spec, rng.random()).unwrap();
    // nonzero biases so ReLU units are not all tied at the origin
    let params: Vec<f64> = net
        .parameters()
        .iter()
        .map(|&p| if p == 0.0 { rng.random_range(-0.5..0.5) } else { p * 2.0 })
        .collect();
    net.set_parameters(&params).unwrap();
    let batch = rng.random_range(1..=5);
    let x = Matrix::from_vec(batch, d, (0..batch * d).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
    let labels: Vec<usize> = (0..batch).map(|_| rng.random_range(0..k)).collect();
    let mut costs = Matrix::zeros(batch, k);
    for (n, &y) in labels.iter().enumerate() {
        for c in 0..k {
            if c != y {
                costs.set(n, c, rng.random_range(0.0..2.0));
            }
        }
    }
    let weights = MixtureWeights::new((0..h - 1).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap();
    Problem {
        net,
        x,
        costs,
        labels,
        weights,
    }
}

pub fn objective(p: &Problem, net: &AuxNet) -> f64 {
    let trace = net.forward(&p.x).unwrap();
    auxit_objective(&trace, &p.costs, &p.labels, &p.weights).unwrap().total
}

/// Which piece of the piecewise-smooth objective a parameter vector sits in:
/// ReLU on/off pattern and the active set of every one-sided hinge.
pub fn kink_signature(p: &Problem, net: &AuxNet) -> Vec<bool> {
    let trace = net.forward(&p.x).unwrap();
    let mut sig = Vec::new();
    if net.spec().activation == Activation::Relu {
        for layer in &trace.trunk {
            sig.extend(layer.pre.as_slice().iter().map(|&z| z > 0.0));
        }
    }
    for out in trace.aux_outputs().chain(std::iter::once(trace.main_output())) {
        for (n, &y) in p.labels.iter().enumerate() {
            for (k, &r) in out.row(n).iter().enumerate() {
                let c = p.costs.get(n, k);
                let margin = if k == y { r - c } else { c - r };
                sig.push(margin > 0.0);
            }
        }
    }
    sig
}

#[derive(Debug, Default, Clone, Copy)]
pub struct GradCheck {
    pub checked: usize,
    pub excluded: usize,
    pub worst: f64,
}

/// Central differences over every parameter. Parameters whose ±step
/// perturbation moves the objective onto a different smooth piece are skipped.
pub fn grad_check(p: &Problem, step: f64, floor: f64) -> GradCheck {
    let trace = p.net.forward(&p.x).unwrap();
    let obj = auxit_objective(&trace, &p.costs, &p.labels, &p.weights).unwrap();
    let analytic = p.net.backward(&trace, &obj.head_grads()).unwrap().flatten();
    let theta = p.net.parameters();
    assert_eq!(analytic.len(), theta.len());
    let base_sig = kink_signature(p, &p.net);
    let mut net = p.net.clone();
    let mut out = GradCheck::default();
    for i in 0..theta.len() {
        let mut t = theta.clone();
        t[i] = theta[i] + step;
        net.set_parameters(&t).unwrap();
        let (f_plus, sig_plus) = (objective(p, &net), kink_signature(p, &net));
        t[i] = theta[i] - step;
        net.set_parameters(&t).unwrap();
        let (f_minus, sig_minus) = (objective(p, &net), kink_signature(p, &net));
        if sig_plus != base_sig || sig_minus != base_sig {
            out.excluded += 1;
            continue;
        }
        let numeric = (f_plus - f_minus) / (2.0 * step);
        let a = analytic[i];
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(floor);
        out.worst = out.worst.max(rel);
        out.checked += 1;
    }
    out
}

/// Random rooted tree as `child,parent` edges, shuffled. Node 0 is the root.
pub fn random_tree_edges(rng: &mut Rng, max_leaves: usize) -> Vec<(String, String)> {
    loop {
        let nodes = rng.random_range(1..=max_leaves + 12);
        let parents: Vec<usize> = (1..=nodes).map(|i| rng.random_range(0..i)).collect();
        let mut has_child = vec![false; nodes + 1];
        for &p in &parents {
            has_child[p] = true;
        }
        let leaves = (1..=nodes).filter(|&n| !has_child[n]).count();
        if leaves > max_leaves {
            continue;
        }
        let name = |n: usize| if n == 0 { "root".to_string() } else { format!("n{n}") };
        let mut edges: Vec<(String, String)> = parents
            .iter()
            .enumerate()
            .map(|(i, &p)| (name(i + 1), name(p)))
            .collect();
        edges.shuffle(rng);
        return edges;
    }
}

/// Breadth-first distances between every pair of leaves, keyed by name.
pub fn bfs_leaf_distances(edges: &[(String, String)]) -> HashMap<(String, String), usize> {
    let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
    let mut children: HashMap<&str, usize> = HashMap::new();
    for (c, p) in edges {
        adj.entry(c).or_default().push(p);
        adj.entry(p).or_default().push(c);
        *children.entry(p).or_default() += 1;
    }
    let leaves: Vec<&str> = edges
        .iter()
        .map(|(c, _)| c.as_str())
        .filter(|c| !children.contains_key(c))
        .collect();
    let mut out = HashMap::new();
    for &src in &leaves {
        let mut dist: HashMap<&str, usize> = HashMap::from([(src, 0)]);
        let mut queue = VecDeque::from([src]);
        while let Some(n) = queue.pop_front() {
            for &m in &adj[n] {
                if !dist.contains_key(m) {
                    dist.insert(m, dist[n] + 1);
                    queue.push_back(m);
                }
            }
        }
        for &dst in &leaves {
            out.insert((src.to_string(), dst.to_string()), dist[dst]);
        }
    }
    out
}

/// Big-endian IDX writer, independent of the library reader.
pub fn idx_bytes(images: &[Vec<u8>], rows: u32, cols: u32, labels: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let mut img = Vec::new();
    img.extend_from_slice(&0x0803u32.to_be_bytes());
    img.extend_from_slice(&(images.len() as u32).to_be_bytes());
    img.extend_from_slice(&rows.to_be_bytes());
    img.extend_from_slice(&cols.to_be_bytes());
    for im in images {
        img.extend_from_slice(im);
    }
    let mut lbl = Vec::new();
    lbl.extend_from_slice(&0x0801u32.to_be_bytes());
    lbl.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    lbl.extend_from_slice(labels);
    (img, lbl)
}
