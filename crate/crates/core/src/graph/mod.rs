//! Graph shift operators, the feasible set they are projected onto, the
//! rewiring perturbations used to corrupt them and the L1 penalties on them.

mod edgelist;
mod gso;
mod penalty;
mod perturb;
mod project;

pub use edgelist::{read_edge_list, write_edge_list};
pub use gso::Gso;
pub use penalty::{gso_distance_l1, sparsity_penalty};
pub use perturb::{perturb, rewire_edges, subset_rewire, EdgeChange, PerturbationKind, PerturbationSpec, Perturbed};
pub use project::{project_gso, project_matrix, ConstraintSet};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("invariant violation: matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("invariant violation: diagonal entry {node} is {value}, expected 0")]
    NonZeroDiagonal { node: usize, value: f64 },
    #[error("invariant violation: entry ({row}, {col}) = {value} outside [0, 1]")]
    OutOfBox { row: usize, col: usize, value: f64 },
    #[error("dimension mismatch: expected {expected} nodes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("node index {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("graph too dense to rewire: need {requested} absent pairs, have {available}")]
    TooDense { requested: usize, available: usize },
    #[error("subset is empty")]
    EmptySubset,
    #[error("no edges to rewire in subset")]
    NoEdgesInSubset,
    #[error("invalid constraint set: lower {lower} > upper {upper}")]
    InvalidConstraint { lower: f64, upper: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}
