use ndarray::{Array2, ArrayView1, ArrayView2};

use super::{LabeledTargets, ModelError};

/// Mean over masked nodes of `-log softmax(logits_i)[y_i]`.
pub fn masked_cross_entropy(
    logits: ArrayView2<'_, f64>,
    targets: &LabeledTargets,
    mask: &[bool],
) -> Result<f64, ModelError> {
    check(logits, targets, mask)?;
    let mut total = 0.0;
    let mut count = 0usize;
    for (i, row) in logits.outer_iter().enumerate() {
        if mask[i] {
            total += log_sum_exp(row) - row[targets.labels()[i]];
            count += 1;
        }
    }
    Ok(total / count as f64)
}

/// Loss together with its gradient with respect to the logits.
pub fn cross_entropy_with_grad(
    logits: ArrayView2<'_, f64>,
    targets: &LabeledTargets,
    mask: &[bool],
) -> Result<(f64, Array2<f64>), ModelError> {
    check(logits, targets, mask)?;
    let m = mask.iter().filter(|&&b| b).count() as f64;
    let mut grad = Array2::zeros(logits.dim());
    let mut total = 0.0;
    for (i, row) in logits.outer_iter().enumerate() {
        if !mask[i] {
            continue;
        }
        let y = targets.labels()[i];
        let lse = log_sum_exp(row);
        total += lse - row[y];
        for (c, &z) in row.iter().enumerate() {
            grad[[i, c]] = (z - lse).exp() / m;
        }
        grad[[i, y]] -= 1.0 / m;
    }
    Ok((total / m, grad))
}

fn log_sum_exp(row: ArrayView1<'_, f64>) -> f64 {
    let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    max + row.iter().map(|&z| (z - max).exp()).sum::<f64>().ln()
}

fn check(logits: ArrayView2<'_, f64>, targets: &LabeledTargets, mask: &[bool]) -> Result<(), ModelError> {
    let (n, c) = logits.dim();
    if n != targets.num_nodes() || mask.len() != n {
        return Err(ModelError::Shape(format!(
            "logits have {n} rows, targets {} and mask {}",
            targets.num_nodes(),
            mask.len()
        )));
    }
    if c != targets.num_classes() {
        return Err(ModelError::Shape(format!(
            "logits have {c} columns for {} classes",
            targets.num_classes()
        )));
    }
    if !mask.iter().any(|&b| b) {
        return Err(ModelError::EmptyMask);
    }
    Ok(())
}
