use ndarray::ArrayView2;

use super::{Hyperparams, OptimError};
use crate::gnn::{forward, masked_cross_entropy, GnnParams, LabeledTargets, Split};
use crate::graph::{gso_distance_l1, sparsity_penalty, Gso};

/// The joint objective and its three weighted addends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveTerms {
    pub total: f64,
    /// Training cross-entropy.
    pub fit: f64,
    /// `alpha * ||S - S_bar||_1`.
    pub dist: f64,
    /// `lambda * ||S||_1`.
    pub sparsity: f64,
}

pub fn objective(
    theta: &GnnParams,
    s: &Gso,
    sbar: &Gso,
    x: ArrayView2<'_, f64>,
    targets: &LabeledTargets,
    hp: &Hyperparams,
) -> Result<ObjectiveTerms, OptimError> {
    let (logits, _) = forward(x, s.view(), theta)?;
    let fit = masked_cross_entropy(logits.view(), targets, targets.mask(Split::Train))?;
    let dist = hp.alpha * gso_distance_l1(s, sbar)?;
    let sparsity = hp.lambda * sparsity_penalty(s);
    Ok(ObjectiveTerms {
        total: fit + dist + sparsity,
        fit,
        dist,
        sparsity,
    })
}
