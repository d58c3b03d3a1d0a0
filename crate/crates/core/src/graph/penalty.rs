use super::{GraphError, Gso};

/// Entrywise L1 distance `sum_ij |a_ij - b_ij|` over the full matrix.
pub fn gso_distance_l1(a: &Gso, b: &Gso) -> Result<f64, GraphError> {
    if a.n() != b.n() {
        return Err(GraphError::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(a.entries()
        .iter()
        .zip(b.entries().iter())
        .map(|(x, y)| (x - y).abs())
        .sum())
}

/// Entrywise L1 norm of the full matrix.
pub fn sparsity_penalty(s: &Gso) -> f64 {
    s.entries().iter().map(|v| v.abs()).sum()
}
