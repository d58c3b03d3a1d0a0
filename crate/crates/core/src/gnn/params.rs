use ndarray::Array2;
use rand::distr::{Distribution, Uniform};

use super::ModelError;
use crate::rng;

/// Filter-bank coefficients: layer `l` holds `order` matrices of shape
/// `dims[l] x dims[l + 1]`, one per power of the shift operator.
#[derive(Debug, Clone, PartialEq)]
pub struct GnnParams {
    dims: Vec<usize>,
    order: usize,
    layers: Vec<Vec<Array2<f64>>>,
}

impl GnnParams {
    pub fn new(dims: Vec<usize>, order: usize, layers: Vec<Vec<Array2<f64>>>) -> Result<Self, ModelError> {
        check_dims(&dims, order)?;
        if layers.len() != dims.len() - 1 {
            return Err(ModelError::Params(format!(
                "{} layers given for {} dims",
                layers.len(),
                dims.len()
            )));
        }
        for (l, taps) in layers.iter().enumerate() {
            if taps.len() != order {
                return Err(ModelError::Params(format!(
                    "layer {} has {} taps, expected {order}",
                    l + 1,
                    taps.len()
                )));
            }
            for (r, m) in taps.iter().enumerate() {
                if m.dim() != (dims[l], dims[l + 1]) {
                    return Err(ModelError::Params(format!(
                        "layer {} tap {r} has shape {:?}, expected ({}, {})",
                        l + 1,
                        m.dim(),
                        dims[l],
                        dims[l + 1]
                    )));
                }
                if m.iter().any(|v| !v.is_finite()) {
                    return Err(ModelError::Params(format!("layer {} tap {r} is not finite", l + 1)));
                }
            }
        }
        Ok(Self { dims, order, layers })
    }

    pub fn zeros(dims: &[usize], order: usize) -> Result<Self, ModelError> {
        check_dims(dims, order)?;
        let layers = dims
            .windows(2)
            .map(|w| (0..order).map(|_| Array2::zeros((w[0], w[1]))).collect())
            .collect();
        Ok(Self {
            dims: dims.to_vec(),
            order,
            layers,
        })
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(&self.dims, self.order).expect("shape already validated")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of filter taps `R` per layer.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, l: usize) -> &[Array2<f64>] {
        &self.layers[l]
    }

    pub fn layer_mut(&mut self, l: usize) -> &mut [Array2<f64>] {
        &mut self.layers[l]
    }

    /// All coefficient matrices in layer-major, tap-minor order.
    pub fn matrices(&self) -> impl Iterator<Item = &Array2<f64>> {
        self.layers.iter().flatten()
    }

    pub fn matrices_mut(&mut self) -> impl Iterator<Item = &mut Array2<f64>> {
        self.layers.iter_mut().flatten()
    }

    pub fn num_parameters(&self) -> usize {
        self.matrices().map(|m| m.len()).sum()
    }

    /// `self += scale * other`.
    pub fn scaled_add(&mut self, scale: f64, other: &GnnParams) {
        for (a, b) in self.matrices_mut().zip(other.matrices()) {
            a.scaled_add(scale, b);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.matrices()
            .flat_map(|m| m.iter())
            .fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.matrices().all(|m| m.iter().all(|v| v.is_finite()))
    }
}

fn check_dims(dims: &[usize], order: usize) -> Result<(), ModelError> {
    if dims.len() < 2 {
        return Err(ModelError::Params("need at least input and output dims".into()));
    }
    if dims.contains(&0) {
        return Err(ModelError::Params(format!("zero-width layer in {dims:?}")));
    }
    if order == 0 {
        return Err(ModelError::Params("filter order must be at least 1".into()));
    }
    Ok(())
}

/// Half-width of the uniform initialization range for a layer:
/// `sqrt(6 / (fan_in + fan_out)) / order`.
pub fn init_bound(fan_in: usize, fan_out: usize, order: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt() / order as f64
}

/// Glorot-uniform initialization scaled down by the filter order, so the
/// sum over taps has roughly the variance of a single dense layer.
pub fn init_params(dims: &[usize], order: usize, seed: u64) -> Result<GnnParams, ModelError> {
    let mut params = GnnParams::zeros(dims, order)?;
    let mut rng = rng::seeded(seed);
    for l in 0..params.num_layers() {
        let b = init_bound(dims[l], dims[l + 1], order);
        let dist = Uniform::new_inclusive(-b, b).expect("finite bound");
        for m in params.layer_mut(l) {
            m.mapv_inplace(|_| dist.sample(&mut rng));
        }
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_reproducible_and_bounded() {
        let a = init_params(&[5, 4, 3], 3, 17).unwrap();
        let b = init_params(&[5, 4, 3], 3, 17).unwrap();
        let c = init_params(&[5, 4, 3], 3, 18).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        for l in 0..2 {
            let bound = init_bound(a.dims()[l], a.dims()[l + 1], 3);
            assert!(a.layer(l).iter().flat_map(|m| m.iter()).all(|v| v.abs() <= bound));
        }
    }

    #[test]
    fn init_variance_matches_uniform() {
        // 100 x 100 single layer, R = 1: 10^4 draws from U[-b, b].
        let p = init_params(&[100, 100], 1, 5).unwrap();
        let b = init_bound(100, 100, 1);
        let m = &p.layer(0)[0];
        let mean = m.mean().unwrap();
        let var = m.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m.len() as f64;
        let expected = b * b / 3.0;
        assert!((var - expected).abs() / expected < 0.1, "var {var} vs {expected}");
    }

    #[test]
    fn shape_validation() {
        assert!(GnnParams::zeros(&[3], 1).is_err());
        assert!(GnnParams::zeros(&[3, 2], 0).is_err());
        assert!(GnnParams::new(vec![3, 2], 1, vec![vec![Array2::zeros((2, 3))]]).is_err());
        assert!(GnnParams::new(vec![3, 2], 2, vec![vec![Array2::zeros((3, 2))]]).is_err());
        let p = GnnParams::zeros(&[3, 4, 2], 2).unwrap();
        assert_eq!(p.num_parameters(), 2 * (12 + 8));
    }
}
