use ndarray::{Array2, ArrayView2};

use super::GraphError;

/// A validated graph shift operator.
///
/// Entries are held densely. A `Gso` is always square, finite, symmetric,
/// has a zero diagonal and every entry lies in `[0, 1]`; construction
/// rejects anything else. Intermediate matrices produced during
/// optimization live as plain `Array2<f64>` until they are projected.
#[derive(Debug, Clone, PartialEq)]
pub struct Gso {
    entries: Array2<f64>,
}

impl Gso {
    pub fn new(entries: Array2<f64>) -> Result<Self, GraphError> {
        validate(entries.view())?;
        Ok(Self { entries })
    }

    /// The empty graph on `n` nodes.
    pub fn zeros(n: usize) -> Self {
        Self {
            entries: Array2::zeros((n, n)),
        }
    }

    /// Builds a graph from undirected weighted edges. Both `(i, j)` and
    /// `(j, i)` are set; repeated edges keep the last weight.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut entries = Array2::zeros((n, n));
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(GraphError::NodeOutOfRange { node: i.max(j), n });
            }
            entries[[i, j]] = w;
            entries[[j, i]] = w;
        }
        Self::new(entries)
    }

    /// Builds an unweighted graph from undirected node pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let edges: Vec<_> = pairs.iter().map(|&(i, j)| (i, j, 1.0)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.entries.view()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.entries
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.entries[[i, j]]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.entries[[i, j]] != 0.0
    }

    /// Undirected edges `(i, j, w)` with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.entries[[i, j]];
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        let n = self.n();
        (0..n)
            .map(|i| ((i + 1)..n).filter(|&j| self.entries[[i, j]] != 0.0).count())
            .sum()
    }

    /// Number of nonzero entries of the full matrix.
    pub fn nnz(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0.0).count()
    }
}

fn validate(m: ArrayView2<'_, f64>) -> Result<(), GraphError> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(GraphError::NotSquare { rows, cols });
    }
    for ((i, j), &v) in m.indexed_iter() {
        if !v.is_finite() {
            return Err(GraphError::NonFinite { row: i, col: j });
        }
        if i == j && v != 0.0 {
            return Err(GraphError::NonZeroDiagonal { node: i, value: v });
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(GraphError::OutOfBox {
                row: i,
                col: j,
                value: v,
            });
        }
        if j > i && m[[j, i]] != v {
            return Err(GraphError::NotSymmetric { row: i, col: j });
        }
    }
    Ok(())
}
