use ndarray::Array2;

/// Scales every row to unit L1 norm. All-zero rows are left as they are.
pub fn normalize_features(features: &Array2<f64>) -> Array2<f64> {
    let mut out = features.clone();
    for mut row in out.outer_iter_mut() {
        let norm: f64 = row.iter().map(|v| v.abs()).sum();
        if norm > 0.0 {
            row.mapv_inplace(|v| v / norm);
        }
    }
    out
}
