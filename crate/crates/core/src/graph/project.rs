use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use super::{GraphError, Gso};

/// The convex feasible set for the shift operator: an entrywise box,
/// optionally intersected with the symmetric and zero-diagonal subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstraintSet {
    pub lower: f64,
    pub upper: f64,
    pub force_symmetric: bool,
    pub force_zero_diagonal: bool,
}

impl Default for ConstraintSet {
    fn default() -> Self {
        Self {
            lower: 0.0,
            upper: 1.0,
            force_symmetric: true,
            force_zero_diagonal: true,
        }
    }
}

impl ConstraintSet {
    pub fn validate(&self) -> Result<(), GraphError> {
        if !(self.lower.is_finite() && self.upper.is_finite()) || self.lower > self.upper {
            return Err(GraphError::InvalidConstraint {
                lower: self.lower,
                upper: self.upper,
            });
        }
        Ok(())
    }
}

/// Euclidean projection of `raw` onto `c`, returned as a plain matrix.
///
/// Symmetrize, zero the diagonal, clamp. The box is separable and invariant
/// under transposition, so clamping the symmetric part is the exact
/// projection onto the intersection.
pub fn project_matrix(raw: ArrayView2<'_, f64>, c: &ConstraintSet) -> Result<Array2<f64>, GraphError> {
    c.validate()?;
    let (rows, cols) = raw.dim();
    if rows != cols {
        return Err(GraphError::NotSquare { rows, cols });
    }
    if let Some(((row, col), _)) = raw.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(GraphError::NonFinite { row, col });
    }
    let n = rows;
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i == j && c.force_zero_diagonal {
                continue;
            }
            let v = if c.force_symmetric && i != j {
                (raw[[i, j]] + raw[[j, i]]) / 2.0
            } else {
                raw[[i, j]]
            };
            out[[i, j]] = v.clamp(c.lower, c.upper);
        }
    }
    Ok(out)
}

/// Projects onto `c` and wraps the result as a [`Gso`]. Fails if `c` is
/// looser than the shift-operator invariants (for example a negative lower
/// bound) and the projection lands outside them.
pub fn project_gso(raw: ArrayView2<'_, f64>, c: &ConstraintSet) -> Result<Gso, GraphError> {
    Gso::new(project_matrix(raw, c)?)
}
