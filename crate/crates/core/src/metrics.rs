//! Evaluation metrics for trained models and recovered graphs.

use ndarray::ArrayView2;

use crate::gnn::{LabeledTargets, ModelError};
use crate::graph::{GraphError, Gso};

/// Fraction of masked nodes whose highest-scoring class equals the label.
/// Ties go to the lowest class index.
pub fn accuracy(logits: ArrayView2<'_, f64>, targets: &LabeledTargets, mask: &[bool]) -> Result<f64, ModelError> {
    if logits.nrows() != targets.num_nodes() || mask.len() != logits.nrows() {
        return Err(ModelError::Shape(format!(
            "logits have {} rows, targets {} and mask {}",
            logits.nrows(),
            targets.num_nodes(),
            mask.len()
        )));
    }
    let mut hits = 0usize;
    let mut total = 0usize;
    for (i, row) in logits.outer_iter().enumerate() {
        if !mask[i] {
            continue;
        }
        total += 1;
        let mut best = 0;
        for (c, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = c;
            }
        }
        if best == targets.labels()[i] {
            hits += 1;
        }
    }
    if total == 0 {
        return Err(ModelError::EmptyMask);
    }
    Ok(hits as f64 / total as f64)
}

/// Edge threshold applied to a recovered graph before comparing supports.
pub const RECOVERY_THRESHOLD: f64 = 0.5;

/// `||bin(S_hat) - S||_F^2 / max(||S||_F^2, eps)` where `bin` sets entries
/// at or above [`RECOVERY_THRESHOLD`] to one and the rest to zero.
pub fn graph_recovery_error(s_hat: &Gso, s_true: &Gso) -> Result<f64, GraphError> {
    if s_hat.n() != s_true.n() {
        return Err(GraphError::DimensionMismatch {
            expected: s_true.n(),
            found: s_hat.n(),
        });
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (&a, &b) in s_hat.entries().iter().zip(s_true.entries().iter()) {
        let bin = if a >= RECOVERY_THRESHOLD { 1.0 } else { 0.0 };
        num += (bin - b) * (bin - b);
        den += b * b;
    }
    Ok(num / den.max(f64::EPSILON))
}
