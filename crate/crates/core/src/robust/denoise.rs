use ndarray::{Array2, ArrayView2};

use super::{prox_l1, prox_shifted_l1, Hyperparams, OptimError};
use crate::gnn::{backward_from, cross_entropy_with_grad, forward_projected, GnnParams, LabeledTargets, Split, Wanted};
use crate::graph::{project_gso, Gso};

/// One graph update with the weights held fixed: `hp.tau_max` iterations of
///
/// 1. gradient step on the training loss, `S - eta * grad`
/// 2. soft thresholding by `eta * lambda`
/// 3. shifted soft thresholding toward `sbar` by `eta * alpha`
/// 4. projection onto `hp.constraint`
pub fn denoise_gso_step(
    s_t: &Gso,
    sbar: &Gso,
    x: ArrayView2<'_, f64>,
    theta: &GnnParams,
    targets: &LabeledTargets,
    hp: &Hyperparams,
) -> Result<Gso, OptimError> {
    hp.validate()?;
    let n = s_t.n();
    if sbar.n() != n || x.nrows() != n {
        return Err(OptimError::Shape(format!(
            "gso has {n} nodes, observation {}, features {}",
            sbar.n(),
            x.nrows()
        )));
    }
    if let Some(m) = &hp.prox_mask {
        if m.n() != n {
            return Err(OptimError::Shape(format!("prox mask has {} nodes, gso {n}", m.n())));
        }
    }
    // The first layer's X * Theta_r products do not depend on S.
    let first: Vec<Array2<f64>> = theta.layer(0).iter().map(|t| x.dot(t)).collect();
    let mask = targets.mask(Split::Train);
    let mut current = s_t.clone();
    for inner in 0..hp.tau_max {
        let (logits, cache) = forward_projected(x, current.view(), theta, Some(&first))?;
        let (_, dlogits) = cross_entropy_with_grad(logits.view(), targets, mask)?;
        let (_, grad) = backward_from(&cache, theta, current.view(), dlogits, Wanted::Gso)?;
        let grad = grad.expect("gso gradient requested");
        if grad.iter().any(|v| !v.is_finite()) {
            return Err(OptimError::NonFiniteGradient { inner });
        }
        let mut stepped = current.into_inner();
        stepped.scaled_add(-hp.eta, &grad);
        let sparse = prox_l1(stepped.view(), hp.eta * hp.lambda)?;
        let anchored = prox_shifted_l1(sparse.view(), sbar.view(), hp.eta * hp.alpha, hp.prox_mask.as_ref())?;
        current = project_gso(anchored.view(), &hp.constraint)?;
    }
    Ok(current)
}

/// Largest gradient magnitude of the training loss with respect to any
/// entry of `s`. With `lambda = 0` and `alpha` strictly above this value at
/// every iterate, the distance prox returns the observation unchanged.
pub fn gso_gradient_bound(
    s: ArrayView2<'_, f64>,
    x: ArrayView2<'_, f64>,
    theta: &GnnParams,
    targets: &LabeledTargets,
) -> Result<f64, OptimError> {
    let (logits, cache) = forward_projected(x, s, theta, None)?;
    let (_, dlogits) = cross_entropy_with_grad(logits.view(), targets, targets.mask(Split::Train))?;
    let (_, grad) = backward_from(&cache, theta, s, dlogits, Wanted::Gso)?;
    Ok(grad.expect("requested").iter().fold(0.0, |m, v| m.max(v.abs())))
}
