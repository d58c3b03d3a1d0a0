//! Perturbation sweeps: paired multi-seed trials of the robust and the
//! baseline method, CSV output and aggregation.

mod config;
mod output;
mod runner;
pub mod seeds;
pub mod stats;
mod summary;

pub use config::{ExperimentConfig, Method, OptimConfig, PerturbationConfig, SplitConfig, SweepKind};
pub use output::{read_results, write_header, write_row, ResultRow, COLUMNS};
pub use runner::{
    load_dataset, method_hyperparams, observe, realization_targets, run_experiment, run_experiment_to, run_trial,
    Observation, SweepOutcome, MANIFEST_FILE,
};
pub use summary::{paired_comparison, summarize, PairedComparison, SummaryRow};

pub use crate::metrics::{accuracy, graph_recovery_error};

use crate::data::DataError;
use crate::gnn::ModelError;
use crate::graph::GraphError;
use crate::robust::OptimError;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Optim(#[from] OptimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("results file: {0}")]
    Results(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
