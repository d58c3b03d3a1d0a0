//! Graph-filter GNNs trained jointly with a denoised shift operator.
//!
//! Training alternates between fitting the filter-bank weights on the
//! current graph estimate and a projected proximal-gradient pass that pulls
//! the estimate toward a sparse matrix close to the observed, perturbed
//! graph. See the crate README for the experiment harness.

pub mod data;
pub mod experiment;
pub mod gnn;
pub mod graph;
pub mod metrics;
pub mod rng;
pub mod robust;
