//! The filter-bank graph neural network: parameters, forward pass,
//! masked cross-entropy and exact reverse-mode gradients with respect to
//! both the filter coefficients and the shift operator.

mod checkpoint;
mod filter;
mod loss;
mod network;
mod params;
mod targets;

pub use checkpoint::{read_checkpoint, write_checkpoint};
pub use filter::apply_filter;
pub use loss::{cross_entropy_with_grad, masked_cross_entropy};
pub use network::{backward, forward, ForwardCache, Gradients, LayerCache};
pub(crate) use network::{backward_from, forward_projected, Wanted};
pub use params::{init_bound, init_params, GnnParams};
pub use targets::{LabeledTargets, Split};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invalid targets: {0}")]
    Targets(String),
    #[error("mask selects no nodes")]
    EmptyMask,
    #[error("non-finite values in layer {layer}")]
    NonFinite { layer: usize },
    #[error("cache does not match parameters: {0}")]
    CacheMismatch(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}
