use ndarray::{Array1, ArrayView1, ArrayView2};

use super::ModelError;

/// Applies the graph filter `sum_r h_r S^r` to the signal `x` by repeated
/// shifting: `x, Sx, S^2 x, ...`.
pub fn apply_filter(h: &[f64], s: ArrayView2<'_, f64>, x: ArrayView1<'_, f64>) -> Result<Array1<f64>, ModelError> {
    if h.is_empty() {
        return Err(ModelError::Params("filter needs at least one coefficient".into()));
    }
    let n = x.len();
    if s.dim() != (n, n) {
        return Err(ModelError::Shape(format!(
            "gso is {:?}, signal has length {n}",
            s.dim()
        )));
    }
    let mut shifted = x.to_owned();
    let mut out = &shifted * h[0];
    for &coef in &h[1..] {
        shifted = s.dot(&shifted);
        out.scaled_add(coef, &shifted);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    #[test]
    fn identity_and_zero_shift() {
        let x = array![1.0, -2.0, 0.5];
        let s = array![[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
        assert_eq!(apply_filter(&[1.0, 0.0, 0.0], s.view(), x.view()).unwrap(), x);
        let z = Array2::zeros((3, 3));
        assert_eq!(apply_filter(&[2.5, 7.0, -1.0], z.view(), x.view()).unwrap(), &x * 2.5);
    }

    #[test]
    fn path_neighbor_indicator() {
        // 0 - 1 - 2: S e_1 indicates the neighbors of node 1.
        let s = array![[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
        let e1 = array![0.0, 1.0, 0.0];
        assert_eq!(
            apply_filter(&[0.0, 1.0], s.view(), e1.view()).unwrap(),
            array![1.0, 0.0, 1.0]
        );
        // h = [1, 1, 1] on e_0: e_0 + S e_0 + S^2 e_0 = [1,0,0] + [0,1,0] + [1,0,1].
        let e0 = array![1.0, 0.0, 0.0];
        assert_eq!(
            apply_filter(&[1.0, 1.0, 1.0], s.view(), e0.view()).unwrap(),
            array![2.0, 1.0, 1.0]
        );
    }

    #[test]
    fn errors() {
        let s = Array2::zeros((2, 2));
        assert!(apply_filter(&[], s.view(), array![1.0, 2.0].view()).is_err());
        assert!(apply_filter(&[1.0], s.view(), array![1.0].view()).is_err());
    }
}
