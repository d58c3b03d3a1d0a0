use ndarray::ArrayView2;

use super::{Hyperparams, OptimError, STEP1_MOMENTUM};
use crate::gnn::{
    backward_from, cross_entropy_with_grad, forward, GnnParams, LabeledTargets, ModelError, Split, Wanted,
};

/// Heavy-ball gradient descent on the filter coefficients:
/// `v <- momentum * v + g`, `theta <- theta - lr * v`.
#[derive(Debug, Clone)]
pub struct ThetaOptimizer {
    velocity: GnnParams,
    lr: f64,
    momentum: f64,
}

impl ThetaOptimizer {
    pub fn new(like: &GnnParams, lr: f64) -> Self {
        Self {
            velocity: like.zeros_like(),
            lr,
            momentum: STEP1_MOMENTUM,
        }
    }

    /// Runs `epochs` full-batch steps on the training loss with `s` fixed.
    /// Returns the training loss before the last step, or `None` for zero
    /// epochs.
    pub fn run(
        &mut self,
        theta: &mut GnnParams,
        s: ArrayView2<'_, f64>,
        x: ArrayView2<'_, f64>,
        targets: &LabeledTargets,
        epochs: usize,
    ) -> Result<Option<f64>, OptimError> {
        let mask = targets.mask(Split::Train);
        let mut last = None;
        for epoch in 0..epochs {
            let (logits, cache) = forward(x, s, theta).map_err(|e| match e {
                ModelError::NonFinite { .. } => OptimError::Diverged {
                    epoch,
                    loss: f64::INFINITY,
                },
                other => other.into(),
            })?;
            let (loss, dlogits) = cross_entropy_with_grad(logits.view(), targets, mask)?;
            if !loss.is_finite() {
                return Err(OptimError::Diverged { epoch, loss });
            }
            let (grad, _) = backward_from(&cache, theta, s, dlogits, Wanted::Theta)?;
            let grad = grad.expect("theta gradient requested");
            if !grad.is_finite() {
                return Err(OptimError::Diverged { epoch, loss });
            }
            for (v, g) in self.velocity.matrices_mut().zip(grad.matrices()) {
                v.zip_mut_with(g, |v, &g| *v = self.momentum * *v + g);
            }
            theta.scaled_add(-self.lr, &self.velocity);
            last = Some(loss);
        }
        Ok(last)
    }
}

/// Fits the weights for `hp.step1_epochs` epochs on the fixed graph `s`,
/// starting from `theta` with zero momentum.
pub fn fit_theta_step(
    theta: &GnnParams,
    s: ArrayView2<'_, f64>,
    x: ArrayView2<'_, f64>,
    targets: &LabeledTargets,
    hp: &Hyperparams,
) -> Result<GnnParams, OptimError> {
    hp.validate()?;
    let mut out = theta.clone();
    ThetaOptimizer::new(theta, hp.step1_lr).run(&mut out, s, x, targets, hp.step1_epochs)?;
    Ok(out)
}
