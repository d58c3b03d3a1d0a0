//! Closed-form proximal maps of the two L1 terms.

use ndarray::{Array2, ArrayView2, Zip};

use super::{OptimError, ProxMask};

/// Soft thresholding, `sign(x) * max(|x| - threshold, 0)` entrywise.
pub fn prox_l1(raw: ArrayView2<'_, f64>, threshold: f64) -> Result<Array2<f64>, OptimError> {
    check_threshold(threshold)?;
    Ok(raw.mapv(|x| soft_threshold(x, threshold)))
}

pub fn soft_threshold(x: f64, threshold: f64) -> f64 {
    if x > threshold {
        x - threshold
    } else if x < -threshold {
        x + threshold
    } else {
        0.0
    }
}

/// Soft thresholding of `x` toward `anchor` instead of zero. Entries
/// within `threshold` of the anchor, ties included, snap to the anchor
/// exactly.
pub fn shifted_soft_threshold(x: f64, anchor: f64, threshold: f64) -> f64 {
    let d = x - anchor;
    if d > threshold {
        x - threshold
    } else if d < -threshold {
        x + threshold
    } else {
        anchor
    }
}

/// Prox of `threshold * ||. - anchor||_1`. With a mask, entries outside it
/// are returned unchanged.
pub fn prox_shifted_l1(
    raw: ArrayView2<'_, f64>,
    anchor: ArrayView2<'_, f64>,
    threshold: f64,
    mask: Option<&ProxMask>,
) -> Result<Array2<f64>, OptimError> {
    check_threshold(threshold)?;
    if raw.dim() != anchor.dim() {
        return Err(OptimError::Shape(format!(
            "input is {:?}, anchor is {:?}",
            raw.dim(),
            anchor.dim()
        )));
    }
    let mut out = raw.to_owned();
    match mask {
        None => Zip::from(&mut out)
            .and(anchor)
            .for_each(|x, &a| *x = shifted_soft_threshold(*x, a, threshold)),
        Some(m) => {
            if m.cells().dim() != raw.dim() {
                return Err(OptimError::Shape(format!(
                    "mask is {:?}, input is {:?}",
                    m.cells().dim(),
                    raw.dim()
                )));
            }
            Zip::from(&mut out).and(anchor).and(m.cells()).for_each(|x, &a, &on| {
                if on {
                    *x = shifted_soft_threshold(*x, a, threshold)
                }
            })
        }
    }
    Ok(out)
}

fn check_threshold(threshold: f64) -> Result<(), OptimError> {
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(OptimError::InvalidHyperparams(format!(
            "threshold must be finite and >= 0, got {threshold}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn soft_threshold_closed_form() {
        let r = prox_l1(array![[0.7, -0.1], [-0.9, 0.2]].view(), 0.2).unwrap();
        assert!((r[[0, 0]] - 0.5).abs() < 1e-15);
        assert_eq!(r[[0, 1]], 0.0);
        assert!((r[[1, 0]] + 0.7).abs() < 1e-15);
        assert_eq!(r[[1, 1]], 0.0);
        let m = array![[0.3, -4.0], [1e-9, 0.0]];
        assert_eq!(prox_l1(m.view(), 0.0).unwrap(), m);
        assert!(prox_l1(m.view(), -0.1).is_err());
    }

    #[test]
    fn shifted_closed_form() {
        assert!((shifted_soft_threshold(0.9, 0.5, 0.3) - 0.6).abs() < 1e-15);
        assert_eq!(shifted_soft_threshold(0.6, 0.5, 0.3), 0.5);
        assert!((shifted_soft_threshold(0.1, 0.5, 0.3) - 0.4).abs() < 1e-15);
        // The tie maps to the anchor.
        assert_eq!(shifted_soft_threshold(0.75, 0.5, 0.25), 0.5);
        let x = array![[0.1, 0.9], [0.4, 0.3]];
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        assert_eq!(prox_shifted_l1(x.view(), a.view(), 0.0, None).unwrap(), x);
    }

    #[test]
    fn mask_limits_the_map() {
        let x = array![[0.0, 0.9], [0.9, 0.0]];
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        let mask = ProxMask::from_subset(2, &[0]).unwrap();
        let out = prox_shifted_l1(x.view(), a.view(), 0.5, Some(&mask)).unwrap();
        // Only (0, 0) is marked; its value was already at the anchor.
        assert_eq!(out, x);
        let full = ProxMask::from_subset(2, &[0, 1]).unwrap();
        let out = prox_shifted_l1(x.view(), a.view(), 0.5, Some(&full)).unwrap();
        assert_eq!(out, a);
        assert!(prox_shifted_l1(x.view(), array![[0.0]].view(), 0.5, None).is_err());
    }
}
