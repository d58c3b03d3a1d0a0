use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::OptimError;
use crate::graph::ConstraintSet;

/// Momentum of the heavy-ball updates used when fitting the weights.
pub const STEP1_MOMENTUM: f64 = 0.9;

/// Knobs of the alternating minimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hyperparams {
    /// Weight of `||S - S_bar||_1`.
    pub alpha: f64,
    /// Weight of `||S||_1`.
    pub lambda: f64,
    /// Step size of the graph update.
    pub eta: f64,
    /// Outer (alternation) iterations.
    pub t_max: usize,
    /// Proximal-gradient iterations per graph update. Zero skips the
    /// graph update entirely.
    pub tau_max: usize,
    /// Gradient steps on the weights per outer iteration.
    pub step1_epochs: usize,
    pub step1_lr: f64,
    /// Restricts the distance prox to the marked entries.
    #[serde(skip)]
    pub prox_mask: Option<ProxMask>,
    #[serde(default)]
    pub constraint: ConstraintSet,
}

impl Hyperparams {
    /// Defaults for an `n`-node graph: `alpha = lambda = 1e-3 * n`,
    /// `eta = step1_lr = 1e-2`, 30 outer iterations of 50 weight epochs
    /// and 5 graph steps.
    pub fn for_nodes(n: usize) -> Self {
        Self {
            alpha: 1e-3 * n as f64,
            lambda: 1e-3 * n as f64,
            eta: 1e-2,
            t_max: 30,
            tau_max: 5,
            step1_epochs: 50,
            step1_lr: 1e-2,
            prox_mask: None,
            constraint: ConstraintSet::default(),
        }
    }

    /// The non-robust baseline: the same weight optimizer run for
    /// `t_max * step1_epochs` epochs on the observed graph.
    pub fn baseline(&self) -> Self {
        Self {
            t_max: 1,
            tau_max: 0,
            step1_epochs: self.t_max * self.step1_epochs,
            prox_mask: None,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), OptimError> {
        let bad = |msg: String| Err(OptimError::InvalidHyperparams(msg));
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be finite and >= 0, got {}", self.alpha));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be finite and >= 0, got {}", self.lambda));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return bad(format!("eta must be finite and >= 0, got {}", self.eta));
        }
        if !(self.step1_lr > 0.0 && self.step1_lr.is_finite()) {
            return bad(format!("step1_lr must be finite and > 0, got {}", self.step1_lr));
        }
        if self.t_max == 0 {
            return bad("t_max must be at least 1".into());
        }
        self.constraint.validate()?;
        Ok(())
    }
}

/// A symmetric boolean `N x N` mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProxMask {
    cells: Array2<bool>,
}

impl ProxMask {
    pub fn new(cells: Array2<bool>) -> Result<Self, OptimError> {
        let (r, c) = cells.dim();
        if r != c {
            return Err(OptimError::Shape(format!("mask is {r}x{c}")));
        }
        for i in 0..r {
            for j in (i + 1)..r {
                if cells[[i, j]] != cells[[j, i]] {
                    return Err(OptimError::InvalidHyperparams(format!(
                        "prox mask is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { cells })
    }

    /// Marks every pair with both endpoints in `subset`.
    pub fn from_subset(n: usize, subset: &[usize]) -> Result<Self, OptimError> {
        let mut member = vec![false; n];
        for &v in subset {
            if v >= n {
                return Err(OptimError::Shape(format!("subset node {v} out of range for {n} nodes")));
            }
            member[v] = true;
        }
        Ok(Self {
            cells: Array2::from_shape_fn((n, n), |(i, j)| member[i] && member[j]),
        })
    }

    pub fn n(&self) -> usize {
        self.cells.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[[i, j]]
    }

    pub fn cells(&self) -> &Array2<bool> {
        &self.cells
    }
}

/// Architecture of the filter-bank network: hidden widths and number of
/// filter taps per layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Architecture {
    pub hidden: Vec<usize>,
    pub order: usize,
}

impl Default for Architecture {
    fn default() -> Self {
        Self {
            hidden: vec![32],
            order: 3,
        }
    }
}

impl Architecture {
    pub fn dims(&self, inputs: usize, classes: usize) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.hidden.len() + 2);
        dims.push(inputs);
        dims.extend_from_slice(&self.hidden);
        dims.push(classes);
        dims
    }
}
