use std::fmt::Write as _;
use std::path::Path;

use auxit::models::RunMetrics;

use crate::Result;

/// Renders `epoch,loss_aux_1..loss_aux_{H-1},loss_main,loss_total`.
pub fn learning_curves_csv(metrics: &RunMetrics) -> String {
    let heads = metrics.epochs.first().map_or(0, |e| e.aux.len());
    let mut out = String::from("epoch");
    for i in 1..=heads {
        write!(out, ",loss_aux_{i}").expect("string write");
    }
    out.push_str(",loss_main,loss_total\n");
    for e in &metrics.epochs {
        write!(out, "{}", e.epoch).expect("string write");
        for a in &e.aux {
            write!(out, ",{a}").expect("string write");
        }
        writeln!(out, ",{},{}", e.main, e.total).expect("string write");
    }
    out
}

/// Writes the learning curves of a run. Returns `false` (and logs a warning)
/// when the run had no aux heads, in which case only the main and total
/// columns are present.
pub fn emit_learning_curves(metrics: &RunMetrics, path: impl AsRef<Path>) -> Result<bool> {
    let has_aux = metrics.epochs.first().is_some_and(|e| !e.aux.is_empty());
    if !has_aux {
        log::warn!("run has no auxiliary heads; writing main and total losses only");
    }
    std::fs::write(path, learning_curves_csv(metrics))?;
    Ok(has_aux)
}
