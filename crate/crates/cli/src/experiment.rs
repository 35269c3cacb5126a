//! Grid runners: alpha sweeps and the three-way model comparison.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use auxit::models::{evaluate_into, fit, AlphaSetting, ModelKind, NetworkSpec, RunMetrics, TrainConfig};
use auxit::nncore::Activation;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::ExperimentData;
use crate::{CliError, Result};

/// Balancing coefficient used for AuxDNN in the model comparison.
pub const COMPARISON_ALPHA: f64 = 0.2;

/// Training hyperparameters shared by every run of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelOptions {
    pub width: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub beta: f64,
    pub pretrain_epochs: usize,
}

impl Default for ModelOptions {
    fn default() -> Self {
        let c = TrainConfig::default();
        Self {
            width: 64,
            epochs: c.epochs,
            learning_rate: c.learning_rate,
            momentum: c.momentum,
            batch_size: c.batch_size,
            beta: c.beta,
            pretrain_epochs: c.pretrain_epochs,
        }
    }
}

impl ModelOptions {
    pub fn spec(&self, data: &ExperimentData, depth: usize, activation: Activation) -> NetworkSpec {
        NetworkSpec::uniform(data.input_dim(), depth, self.width, activation, data.classes())
    }

    pub fn config(&self, alpha: f64, seed: u64) -> TrainConfig {
        TrainConfig {
            alpha: AlphaSetting::Uniform(alpha),
            learning_rate: self.learning_rate,
            momentum: self.momentum,
            batch_size: self.batch_size,
            epochs: self.epochs,
            seed,
            beta: self.beta,
            pretrain_epochs: self.pretrain_epochs,
        }
    }
}

/// One training run of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunKey {
    pub model: ModelKind,
    pub depth: usize,
    /// Uniform balancing coefficient; `None` for models without aux heads.
    pub alpha: Option<f64>,
    pub seed: u64,
}

impl RunKey {
    pub fn file_stem(&self) -> String {
        match self.alpha {
            Some(a) => format!("{}_h{}_a{}_s{}", self.model, self.depth, a, self.seed),
            None => format!("{}_h{}_s{}", self.model, self.depth, self.seed),
        }
    }

    fn describe(&self) -> String {
        let alpha = self.alpha.map(|a| format!(", alpha {a}")).unwrap_or_default();
        format!("{} depth {}{alpha}, seed {}", self.model, self.depth, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub key: RunKey,
    pub average_cost: f64,
    pub error_rate: f64,
    pub metrics: RunMetrics,
}

/// Mean and sample standard deviation of the test cost at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub model: ModelKind,
    pub depth: usize,
    pub alpha: Option<f64>,
    pub seeds: Vec<u64>,
    pub costs: Vec<f64>,
    pub mean_cost: f64,
    pub std_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<GridPoint>,
    pub runs: Vec<RunRecord>,
}

pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Trains and evaluates a single run. The test split is touched only here,
/// after training.
pub fn run_one(data: &ExperimentData, options: &ModelOptions, key: &RunKey) -> Result<RunRecord> {
    let activation = match key.model {
        ModelKind::Csdnn => Activation::Sigmoid,
        _ => Activation::Relu,
    };
    let spec = options.spec(data, key.depth, activation);
    let config = options.config(key.alpha.unwrap_or(0.0), key.seed);
    let wrap = |source| CliError::Run {
        context: key.describe(),
        source,
    };
    let (net, mut metrics) = fit(key.model, &spec, &data.train, &config).map_err(wrap)?;
    let report = evaluate_into(&net, &data.test, &mut metrics).map_err(wrap)?;
    log::info!("{}: average test cost {}", key.describe(), report.average_cost);
    Ok(RunRecord {
        key: key.clone(),
        average_cost: report.average_cost,
        error_rate: report.error_rate,
        metrics,
    })
}

/// Runs every key on a pool of `workers` threads (0 = one per core) and
/// aggregates per grid point. Output order follows `keys`, independent of
/// scheduling.
pub fn run_grid(data: &ExperimentData, options: &ModelOptions, keys: &[RunKey], workers: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let runs: Vec<RunRecord> = pool.install(|| {
        keys.par_iter()
            .map(|k| run_one(data, options, k))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut points: Vec<GridPoint> = Vec::new();
    for r in &runs {
        let k = &r.key;
        match points
            .iter_mut()
            .find(|p| p.model == k.model && p.depth == k.depth && p.alpha == k.alpha)
        {
            Some(p) => {
                p.seeds.push(k.seed);
                p.costs.push(r.average_cost);
            }
            None => points.push(GridPoint {
                model: k.model,
                depth: k.depth,
                alpha: k.alpha,
                seeds: vec![k.seed],
                costs: vec![r.average_cost],
                mean_cost: 0.0,
                std_cost: 0.0,
            }),
        }
    }
    for p in &mut points {
        (p.mean_cost, p.std_cost) = mean_and_std(&p.costs);
    }
    Ok(SweepResult { points, runs })
}

/// AuxDNN for every `(depth, alpha, seed)`; the `alpha = 0` rows are the
/// plain-network reference.
pub fn run_alpha_sweep(
    data: &ExperimentData,
    options: &ModelOptions,
    depths: &[usize],
    alphas: &[f64],
    seeds: &[u64],
    workers: usize,
) -> Result<SweepResult> {
    if let Some(a) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(CliError::Usage(format!("alpha {a} is outside [0, 1]")));
    }
    check_grid(depths, seeds)?;
    let mut keys = Vec::new();
    for &depth in depths {
        for &alpha in alphas {
            for &seed in seeds {
                keys.push(RunKey {
                    model: ModelKind::AuxDnn,
                    depth,
                    alpha: Some(alpha),
                    seed,
                });
            }
        }
    }
    run_grid(data, options, &keys, workers)
}

/// AuxDNN (alpha 0.2, ReLU), NaiveDNN (ReLU) and CSDNN (sigmoid, CSAE
/// pretrained) for every `(depth, seed)`.
pub fn run_comparison(
    data: &ExperimentData,
    options: &ModelOptions,
    depths: &[usize],
    seeds: &[u64],
    workers: usize,
) -> Result<SweepResult> {
    check_grid(depths, seeds)?;
    let mut keys = Vec::new();
    for &depth in depths {
        for (model, alpha) in [
            (ModelKind::AuxDnn, Some(COMPARISON_ALPHA)),
            (ModelKind::NaiveDnn, None),
            (ModelKind::Csdnn, None),
        ] {
            for &seed in seeds {
                keys.push(RunKey {
                    model,
                    depth,
                    alpha,
                    seed,
                });
            }
        }
    }
    run_grid(data, options, &keys, workers)
}

fn check_grid(depths: &[usize], seeds: &[u64]) -> Result<()> {
    if depths.is_empty() || seeds.is_empty() {
        return Err(CliError::Usage("at least one depth and one seed are required".into()));
    }
    if depths.contains(&0) {
        return Err(CliError::Usage("depths must be at least 1".into()));
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|a| a.to_string()).unwrap_or_default()
}

impl SweepResult {
    /// `model,depth,alpha,seed,average_cost,error_rate,metrics` with one row per run.
    pub fn runs_csv(&self) -> String {
        let mut out = String::from("model,depth,alpha,seed,average_cost,error_rate,metrics\n");
        for r in &self.runs {
            let k = &r.key;
            writeln!(
                out,
                "{},{},{},{},{},{},runs/{}.json",
                k.model,
                k.depth,
                opt(k.alpha),
                k.seed,
                r.average_cost,
                r.error_rate,
                k.file_stem()
            )
            .expect("string write");
        }
        out
    }

    /// `model,depth,alpha,seeds,mean_cost,std_cost` with one row per grid point.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("model,depth,alpha,seeds,mean_cost,std_cost\n");
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p.model,
                p.depth,
                opt(p.alpha),
                p.seeds.len(),
                p.mean_cost,
                p.std_cost
            )
            .expect("string write");
        }
        out
    }

    pub fn point(&self, model: ModelKind, depth: usize, alpha: Option<f64>) -> Option<&GridPoint> {
        self.points
            .iter()
            .find(|p| p.model == model && p.depth == depth && p.alpha == alpha)
    }

    /// Writes `runs.csv`, `summary.csv` and one metrics JSON per run under
    /// `runs/`. Returns the relative paths written.
    pub fn write(&self, dir: &Path) -> Result<Vec<String>> {
        fs::create_dir_all(dir.join("runs"))?;
        let mut files = vec!["runs.csv".to_string(), "summary.csv".to_string()];
        fs::write(dir.join("runs.csv"), self.runs_csv())?;
        fs::write(dir.join("summary.csv"), self.summary_csv())?;
        for r in &self.runs {
            let rel = format!("runs/{}.json", r.key.file_stem());
            fs::write(dir.join(&rel), serde_json::to_string_pretty(&r.metrics)? + "\n")?;
            files.push(rel);
        }
        Ok(files)
    }
}

/// Run description written next to the result tables. Contains no clock or
/// host information, so identical flags give identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a, F: Serialize> {
    pub command: &'a str,
    pub library_version: &'a str,
    pub flags: &'a F,
    pub seeds: &'a [u64],
    pub classes: usize,
    pub input_dim: usize,
    pub train_examples: usize,
    pub test_examples: usize,
    pub files: Vec<String>,
}

pub fn write_manifest<F: Serialize>(dir: &Path, manifest: &Manifest<'_, F>) -> Result<()> {
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(manifest)? + "\n")?;
    Ok(())
}
