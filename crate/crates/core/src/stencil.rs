//! Second-order three-point finite differences on (possibly nonuniform)
//! strictly increasing coordinates.

use ndarray::{Array2, ArrayView2, Axis};

/// Weights of the three-point derivative at node `i`.
///
/// Interior nodes use the centred stencil; the two end nodes use the
/// second-order one-sided stencil.
fn weights(coords: &[f64], i: usize) -> ([usize; 3], [f64; 3]) {
    let n = coords.len();
    debug_assert!(n >= 3);
    if i == 0 {
        let h1 = coords[1] - coords[0];
        let h2 = coords[2] - coords[1];
        (
            [0, 1, 2],
            [
                -(2.0 * h1 + h2) / (h1 * (h1 + h2)),
                (h1 + h2) / (h1 * h2),
                -h1 / (h2 * (h1 + h2)),
            ],
        )
    } else if i == n - 1 {
        let h1 = coords[n - 2] - coords[n - 3];
        let h2 = coords[n - 1] - coords[n - 2];
        (
            [n - 3, n - 2, n - 1],
            [
                h2 / (h1 * (h1 + h2)),
                -(h1 + h2) / (h1 * h2),
                (2.0 * h2 + h1) / (h2 * (h1 + h2)),
            ],
        )
    } else {
        let h1 = coords[i] - coords[i - 1];
        let h2 = coords[i + 1] - coords[i];
        (
            [i - 1, i, i + 1],
            [
                -h2 / (h1 * (h1 + h2)),
                (h2 - h1) / (h1 * h2),
                h1 / (h2 * (h1 + h2)),
            ],
        )
    }
}

/// Derivative of a sampled function, same length as the input.
pub(crate) fn derivative(values: &[f64], coords: &[f64]) -> Vec<f64> {
    debug_assert_eq!(values.len(), coords.len());
    (0..coords.len())
        .map(|i| {
            let (idx, w) = weights(coords, i);
            // Weights sum to zero; differencing keeps constants exact.
            let mid = values[idx[1]];
            w[0] * (values[idx[0]] - mid) + w[2] * (values[idx[2]] - mid)
        })
        .collect()
}

/// Derivative of a periodic uniformly sampled function (centred everywhere).
pub(crate) fn derivative_periodic(values: &[f64], dx: f64) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| (values[(i + 1) % n] - values[(i + n - 1) % n]) / (2.0 * dx))
        .collect()
}

/// Partial derivative of a 2D field along `axis` (0 or 1).
pub(crate) fn partial(field: ArrayView2<f64>, coords: &[f64], axis: usize) -> Array2<f64> {
    let mut out = Array2::zeros(field.raw_dim());
    for (lane_in, mut lane_out) in field
        .lanes(Axis(axis))
        .into_iter()
        .zip(out.lanes_mut(Axis(axis)))
    {
        let values: Vec<f64> = lane_in.iter().copied().collect();
        for (o, d) in lane_out.iter_mut().zip(derivative(&values, coords)) {
            *o = d;
        }
    }
    out
}

/// Partial derivative along axis 1 with periodic wrap on a uniform axis.
pub(crate) fn partial_periodic_axis1(field: ArrayView2<f64>, dx: f64) -> Array2<f64> {
    let mut out = Array2::zeros(field.raw_dim());
    for (row_in, mut row_out) in field.rows().into_iter().zip(out.rows_mut()) {
        let values: Vec<f64> = row_in.iter().copied().collect();
        for (o, d) in row_out.iter_mut().zip(derivative_periodic(&values, dx)) {
            *o = d;
        }
    }
    out
}

/// Linear interpolation of samples at strictly increasing `coords`,
/// clamped to the end values outside the sampled range.
pub(crate) fn interp_clamped(coords: &[f64], values: &[f64], x: f64) -> f64 {
    let n = coords.len();
    if x <= coords[0] {
        return values[0];
    }
    if x >= coords[n - 1] {
        return values[n - 1];
    }
    let k = coords.partition_point(|&c| c <= x).saturating_sub(1).min(n - 2);
    let w = (x - coords[k]) / (coords[k + 1] - coords[k]);
    values[k] * (1.0 - w) + values[k + 1] * w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_differentiated_exactly_on_nonuniform_nodes() {
        let x = [0.0, 0.1, 0.35, 0.4, 0.8, 1.3];
        let f: Vec<f64> = x.iter().map(|&x| 3.0 * x * x - x + 2.0).collect();
        for (d, &xi) in derivative(&f, &x).iter().zip(&x) {
            assert!((d - (6.0 * xi - 1.0)).abs() < 1e-12, "{d} at {xi}");
        }
    }

    #[test]
    fn periodic_sine_converges_at_second_order() {
        let err = |n: usize| {
            let dx = 1.0 / n as f64;
            let f: Vec<f64> = (0..n)
                .map(|i| (2.0 * std::f64::consts::PI * i as f64 * dx).sin())
                .collect();
            derivative_periodic(&f, dx)
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let x = i as f64 * dx;
                    (d - 2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).cos()).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(64) / err(128);
        assert!((3.9..4.1).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn interpolation_clamps_and_hits_nodes() {
        let x = [0.0, 1.0, 3.0];
        let v = [1.0, 2.0, 6.0];
        assert_eq!(interp_clamped(&x, &v, -1.0), 1.0);
        assert_eq!(interp_clamped(&x, &v, 5.0), 6.0);
        assert_eq!(interp_clamped(&x, &v, 1.0), 2.0);
        assert!((interp_clamped(&x, &v, 2.0) - 4.0).abs() < 1e-15);
    }
}
