//! Command-line definitions and the verb implementations behind them.

use std::path::{Path, PathBuf};

use auxit::costs::EvalReport;
use auxit::models::{evaluate_into, fit, load_checkpoint, save_checkpoint, ModelKind, RunMetrics};
use auxit::nncore::Activation;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::curves::emit_learning_curves;
use crate::data::{prepare, DataOptions, DataSource, ExperimentData, Imbalance, SyntheticSpec};
use crate::experiment::{run_alpha_sweep, run_comparison, write_manifest, Manifest, ModelOptions, SweepResult};
use crate::gencosts::{gen_costs, CostSource, CostSummary};
use crate::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "auxit", version, about = "Cost-sensitive deep networks with auxiliary cost-estimation heads")]
pub struct Cli {
    /// Log verbosity (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train AuxDNN over a depth × alpha × seed grid.
    SweepAlpha(SweepArgs),
    /// Train AuxDNN (alpha 0.2), NaiveDNN and CSDNN over a depth × seed grid.
    Compare(CompareArgs),
    /// Generate a cost matrix CSV.
    GenCosts {
        #[command(subcommand)]
        kind: GenCostsKind,
    },
    /// Train one AuxDNN and write its per-epoch head losses.
    Curves(CurvesArgs),
    /// Train one model and save a checkpoint.
    Train(TrainArgs),
    /// Evaluate a checkpoint on the test split.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// MNIST IDX files from --idx-dir; 5000/1000 subset by default.
    Mnist,
    /// Imbalanced Gaussian blobs, no files needed.
    Synthetic,
    /// --train-csv / --test-csv files.
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DataArgs {
    #[arg(long, value_enum, default_value_t = Preset::Mnist)]
    pub preset: Preset,
    /// Directory with the four MNIST IDX files.
    #[arg(long)]
    pub idx_dir: Option<PathBuf>,
    #[arg(long)]
    pub train_csv: Option<PathBuf>,
    #[arg(long)]
    pub test_csv: Option<PathBuf>,
    /// 0-based column holding the 1-based class label.
    #[arg(long, default_value_t = 0)]
    pub label_column: usize,
    #[arg(long)]
    pub n_train: Option<usize>,
    #[arg(long)]
    pub n_test: Option<usize>,
    /// Build the imbalanced variant. Defaults to true for the synthetic preset.
    #[arg(long)]
    pub imbalanced: Option<bool>,
    #[arg(long, default_value_t = 0.4)]
    pub class_fraction: f64,
    #[arg(long, default_value_t = 0.7)]
    pub removal_fraction: f64,
    /// Seed for data generation, imbalancing and randomized costs.
    #[arg(long, default_value_t = 1)]
    pub data_seed: u64,
    /// Use this cost matrix CSV instead of randomized proportional costs.
    #[arg(long)]
    pub cost_matrix: Option<PathBuf>,
}

impl DataArgs {
    pub fn options(&self) -> Result<DataOptions> {
        let (source, n_train, n_test, imbalanced) = match self.preset {
            Preset::Mnist => {
                let dir = self
                    .idx_dir
                    .clone()
                    .ok_or_else(|| CliError::Usage("--preset mnist needs --idx-dir".into()))?;
                (
                    DataSource::Idx { dir },
                    self.n_train.or(Some(5000)),
                    self.n_test.or(Some(1000)),
                    false,
                )
            }
            Preset::Synthetic => (
                DataSource::Synthetic(SyntheticSpec::preset()),
                self.n_train,
                self.n_test,
                true,
            ),
            Preset::Csv => match (&self.train_csv, &self.test_csv) {
                (Some(train), Some(test)) => (
                    DataSource::Csv {
                        train: train.clone(),
                        test: test.clone(),
                        label_column: self.label_column,
                    },
                    self.n_train,
                    self.n_test,
                    false,
                ),
                _ => return Err(CliError::Usage("--preset csv needs --train-csv and --test-csv".into())),
            },
        };
        let imbalance = self.imbalanced.unwrap_or(imbalanced).then_some(Imbalance {
            class_fraction: self.class_fraction,
            removal_fraction: self.removal_fraction,
        });
        Ok(DataOptions {
            source,
            n_train,
            n_test,
            imbalance,
            data_seed: self.data_seed,
            cost_matrix: self.cost_matrix.clone(),
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    /// Neurons per hidden layer.
    #[arg(long, default_value_t = 64)]
    pub width: usize,
    #[arg(long, default_value_t = 30)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 0.9)]
    pub momentum: f64,
    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,
    /// CSAE mixing coefficient for CSDNN pretraining.
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// CSAE epochs per layer for CSDNN.
    #[arg(long, default_value_t = 15)]
    pub pretrain_epochs: usize,
}

impl ModelArgs {
    pub fn options(&self) -> ModelOptions {
        ModelOptions {
            width: self.width,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            momentum: self.momentum,
            batch_size: self.batch_size,
            beta: self.beta,
            pretrain_epochs: self.pretrain_epochs,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub depths: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub seeds: Vec<u64>,
    /// Parallel training runs; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub workers: usize,
    /// Output directory.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Subcommand)]
pub enum GenCostsKind {
    /// Randomized proportional costs from the training split's class counts.
    Proportional {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Edge-count distances on a `child,parent` class hierarchy.
    Tree {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// CSV output path.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// auxdnn, naivednn or csdnn.
    #[arg(long, default_value = "auxdnn")]
    pub kind: ModelKind,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub checkpoint: PathBuf,
    /// Also write the training metrics JSON here.
    #[arg(long)]
    #[serde(skip)]
    pub metrics: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Also write the report JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Executes a parsed command line and returns the text for stdout.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::SweepAlpha(args) => sweep_alpha(&args),
        Command::Compare(args) => compare(&args),
        Command::GenCosts { kind } => gen_costs_cmd(&kind),
        Command::Curves(args) => curves(&args),
        Command::Train(args) => train_cmd(&args),
        Command::Eval(args) => eval_cmd(&args),
    }
}

fn summary_line(result: &SweepResult) -> Result<String> {
    let rows: Vec<serde_json::Value> = result
        .points
        .iter()
        .map(|p| {
            serde_json::json!({
                "model": p.model,
                "depth": p.depth,
                "alpha": p.alpha,
                "mean_cost": p.mean_cost,
                "std_cost": p.std_cost,
            })
        })
        .collect();
    Ok(serde_json::to_string(&rows)?)
}

fn finish<F: Serialize>(
    command: &str,
    flags: &F,
    grid: &GridArgs,
    data: &ExperimentData,
    result: &SweepResult,
) -> Result<String> {
    let files = result.write(&grid.out)?;
    write_manifest(
        &grid.out,
        &Manifest {
            command,
            library_version: env!("CARGO_PKG_VERSION"),
            flags,
            seeds: &grid.seeds,
            classes: data.classes(),
            input_dim: data.input_dim(),
            train_examples: data.train.len(),
            test_examples: data.test.len(),
            files,
        },
    )?;
    summary_line(result)
}

pub fn sweep_alpha(args: &SweepArgs) -> Result<String> {
    let data = prepare(&args.data.options()?)?;
    let result = run_alpha_sweep(
        &data,
        &args.model.options(),
        &args.grid.depths,
        &args.alphas,
        &args.grid.seeds,
        args.grid.workers,
    )?;
    finish("sweep-alpha", args, &args.grid, &data, &result)
}

pub fn compare(args: &CompareArgs) -> Result<String> {
    let data = prepare(&args.data.options()?)?;
    let result = run_comparison(
        &data,
        &args.model.options(),
        &args.grid.depths,
        &args.grid.seeds,
        args.grid.workers,
    )?;
    finish("compare", args, &args.grid, &data, &result)
}

fn gen_costs_cmd(kind: &GenCostsKind) -> Result<String> {
    let (_, summary): (_, CostSummary) = match kind {
        GenCostsKind::Proportional { data, seed, out } => {
            let options = data.options()?;
            gen_costs(
                CostSource::Proportional {
                    data: &options,
                    seed: *seed,
                },
                out,
            )?
        }
        GenCostsKind::Tree { tree, out } => gen_costs(CostSource::Tree { path: tree }, out)?,
    };
    Ok(serde_json::to_string(&summary)?)
}

fn train_model(
    data: &ExperimentData,
    model: &ModelArgs,
    kind: ModelKind,
    depth: usize,
    alpha: f64,
    seed: u64,
) -> Result<(auxit::nncore::AuxNet, RunMetrics)> {
    let activation = if kind == ModelKind::Csdnn {
        Activation::Sigmoid
    } else {
        Activation::Relu
    };
    let options = model.options();
    let spec = options.spec(data, depth, activation);
    Ok(fit(kind, &spec, &data.train, &options.config(alpha, seed))?)
}

pub fn curves(args: &CurvesArgs) -> Result<String> {
    let data = prepare(&args.data.options()?)?;
    let (_, metrics) = train_model(&data, &args.model, ModelKind::AuxDnn, args.depth, args.alpha, args.seed)?;
    emit_learning_curves(&metrics, &args.out)?;
    Ok(serde_json::to_string(&serde_json::json!({
        "curves": args.out,
        "epochs": metrics.epochs.len(),
        "aux_heads": metrics.alphas.len(),
    }))?)
}

pub fn train_cmd(args: &TrainArgs) -> Result<String> {
    let data = prepare(&args.data.options()?)?;
    let (net, metrics) = train_model(&data, &args.model, args.kind, args.depth, args.alpha, args.seed)?;
    save_checkpoint(&net, &metrics.config, &args.checkpoint)?;
    if let Some(path) = &args.metrics {
        write_json(path, &metrics)?;
    }
    let last = metrics.epochs.last();
    Ok(serde_json::to_string(&serde_json::json!({
        "checkpoint": args.checkpoint,
        "model": args.kind,
        "final_main_loss": last.map(|e| e.main),
        "final_total_loss": last.map(|e| e.total),
    }))?)
}

pub fn eval_cmd(args: &EvalArgs) -> Result<String> {
    let data = prepare(&args.data.options()?)?;
    let (net, config) = load_checkpoint(&args.checkpoint)?;
    if net.input_dim() != data.input_dim() || net.classes() != data.classes() {
        return Err(CliError::Usage(format!(
            "checkpoint expects D={}, K={} but the dataset has D={}, K={}",
            net.input_dim(),
            net.classes(),
            data.input_dim(),
            data.classes()
        )));
    }
    let mut metrics = RunMetrics {
        spec: net.spec().clone(),
        config,
        alphas: Vec::new(),
        epochs: Vec::new(),
        pretrain: Vec::new(),
        eval: None,
    };
    let report: EvalReport = evaluate_into(&net, &data.test, &mut metrics)?;
    if let Some(path) = &args.out {
        write_json(path, &report)?;
    }
    Ok(serde_json::to_string(&report)?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}
