use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::ArrayView2;

use super::{denoise_gso_step, objective, Architecture, Hyperparams, ObjectiveTerms, OptimError, ThetaOptimizer};
use crate::gnn::{forward, init_params, write_checkpoint, GnnParams, LabeledTargets, Split};
use crate::graph::{project_gso, write_edge_list, Gso};
use crate::metrics::accuracy;

/// Objective and accuracies after one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: usize,
    pub terms: ObjectiveTerms,
    pub train_acc: f64,
    /// `NaN` when the validation mask is empty.
    pub val_acc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult {
    pub theta_hat: GnnParams,
    pub s_hat: Gso,
    pub trace: Vec<TraceRow>,
    pub objective_terms: ObjectiveTerms,
}

impl TrainResult {
    /// Objective value after every outer iteration.
    pub fn loss_trace(&self) -> Vec<f64> {
        self.trace.iter().map(|r| r.terms.total).collect()
    }

    /// Writes `theta.ckpt`, `s_hat.edges` and `trace.txt` into `dir`.
    pub fn save(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        write_checkpoint(&self.theta_hat, BufWriter::new(File::create(dir.join("theta.ckpt"))?))?;
        write_edge_list(&self.s_hat, BufWriter::new(File::create(dir.join("s_hat.edges"))?))?;
        self.write_trace(BufWriter::new(File::create(dir.join("trace.txt"))?))
    }

    /// One line per outer iteration: `t total fit dist sparsity train_acc val_acc`.
    pub fn write_trace<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# t total fit dist sparsity train_acc val_acc")?;
        for r in &self.trace {
            writeln!(
                out,
                "{} {} {} {} {} {} {}",
                r.t, r.terms.total, r.terms.fit, r.terms.dist, r.terms.sparsity, r.train_acc, r.val_acc
            )?;
        }
        out.flush()
    }
}

/// Alternating minimization over weights and graph.
///
/// Starts from `S_0 = proj(sbar)` and weights drawn by [`init_params`] with
/// `seed`. Each outer iteration fits the weights on the current graph, then
/// runs one [`denoise_gso_step`]. The momentum buffer of the weight
/// optimizer carries over between outer iterations, so with
/// `tau_max = 0` the run is exactly `t_max * step1_epochs` epochs of plain
/// training on `proj(sbar)`.
pub fn train_robust(
    x: ArrayView2<'_, f64>,
    targets: &LabeledTargets,
    sbar: &Gso,
    arch: &Architecture,
    hp: &Hyperparams,
    seed: u64,
) -> Result<TrainResult, OptimError> {
    hp.validate()?;
    let n = sbar.n();
    if x.nrows() != n || targets.num_nodes() != n {
        return Err(OptimError::Shape(format!(
            "graph has {n} nodes, features {}, targets {}",
            x.nrows(),
            targets.num_nodes()
        )));
    }
    let mut theta = init_params(&arch.dims(x.ncols(), targets.num_classes()), arch.order, seed)?;
    let mut s = project_gso(sbar.view(), &hp.constraint)?;
    let mut opt = ThetaOptimizer::new(&theta, hp.step1_lr);
    let mut trace = Vec::with_capacity(hp.t_max);
    for t in 0..hp.t_max {
        opt.run(&mut theta, s.view(), x, targets, hp.step1_epochs)?;
        if hp.tau_max > 0 {
            s = denoise_gso_step(&s, sbar, x, &theta, targets, hp)?;
        }
        trace.push(trace_row(t, &theta, &s, sbar, x, targets, hp)?);
    }
    let objective_terms = trace.last().expect("t_max >= 1").terms;
    Ok(TrainResult {
        theta_hat: theta,
        s_hat: s,
        trace,
        objective_terms,
    })
}

/// Weight-only training on a fixed graph: [`init_params`] with `seed`, then
/// `epochs` heavy-ball steps with learning rate `lr`.
pub fn train_classical(
    x: ArrayView2<'_, f64>,
    targets: &LabeledTargets,
    s: &Gso,
    arch: &Architecture,
    epochs: usize,
    lr: f64,
    seed: u64,
) -> Result<GnnParams, OptimError> {
    let mut theta = init_params(&arch.dims(x.ncols(), targets.num_classes()), arch.order, seed)?;
    let mut opt = ThetaOptimizer::new(&theta, lr);
    opt.run(&mut theta, s.view(), x, targets, epochs)?;
    Ok(theta)
}

fn trace_row(
    t: usize,
    theta: &GnnParams,
    s: &Gso,
    sbar: &Gso,
    x: ArrayView2<'_, f64>,
    targets: &LabeledTargets,
    hp: &Hyperparams,
) -> Result<TraceRow, OptimError> {
    let terms = objective(theta, s, sbar, x, targets, hp)?;
    let (logits, _) = forward(x, s.view(), theta)?;
    let train_acc = accuracy(logits.view(), targets, targets.mask(Split::Train))?;
    let val_acc = if targets.count(Split::Val) > 0 {
        accuracy(logits.view(), targets, targets.mask(Split::Val))?
    } else {
        f64::NAN
    };
    Ok(TraceRow {
        t,
        terms,
        train_acc,
        val_acc,
    })
}
