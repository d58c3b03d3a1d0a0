//! Joint estimation of the network weights and the shift operator.
//!
//! Weights are fitted by heavy-ball gradient descent with the graph fixed;
//! the graph is then refined with the weights fixed by projected proximal
//! gradient steps on
//!
//! ```text
//! L(f_theta(X | S), Y_train) + alpha ||S - S_bar||_1 + lambda ||S||_1
//! ```
//!
//! over the feasible set of the [`ConstraintSet`](crate::graph::ConstraintSet).

mod denoise;
mod fit;
mod hyper;
mod objective;
mod prox;
mod train;

pub use denoise::{denoise_gso_step, gso_gradient_bound};
pub use fit::{fit_theta_step, ThetaOptimizer};
pub use hyper::{Architecture, Hyperparams, ProxMask, STEP1_MOMENTUM};
pub use objective::{objective, ObjectiveTerms};
pub use prox::{prox_l1, prox_shifted_l1, shifted_soft_threshold, soft_threshold};
pub use train::{train_classical, train_robust, TraceRow, TrainResult};

use crate::gnn::ModelError;
use crate::graph::GraphError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum OptimError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparams(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite gso gradient at inner iteration {inner}")]
    NonFiniteGradient { inner: usize },
    #[error("weight fitting diverged at epoch {epoch} (loss {loss})")]
    Diverged { epoch: usize, loss: f64 },
}
