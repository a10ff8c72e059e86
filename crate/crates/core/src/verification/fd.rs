//! Finite-difference derivatives for data without analytic derivatives.

/// Fornberg's recursion: `w[k][i]` is the weight of `points[i]` in the
/// k-th derivative at `x0`, for k = 0..=max_order.
pub fn fornberg_weights(x0: f64, points: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut w = vec![vec![0.0; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = points[0] - x0;
    w[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = points[i] - x0;
        for j in 0..i {
            let c3 = points[i] - points[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    w
}

/// Derivatives 0..=max_order at `x0` from tabulated `(points, values)`.
pub fn tabulated_derivatives(x0: f64, points: &[f64], values: &[f64], max_order: usize) -> Vec<f64> {
    fornberg_weights(x0, points, max_order)
        .iter()
        .map(|w| w.iter().zip(values).map(|(a, b)| a * b).sum())
        .collect()
}

/// Step used for each derivative order by [`richardson_derivatives`];
/// higher orders need wider steps to stay above round-off.
pub const RICHARDSON_STEPS: [f64; 5] = [0.0, 1e-4, 1e-3, 5e-3, 2e-2];

/// Centered five-point stencils with one Richardson halving, for orders
/// 1..=4 (order 0 is the plain value).
pub fn richardson_derivatives(f: impl Fn(f64) -> f64, x: f64, max_order: usize) -> Vec<f64> {
    assert!(max_order <= 4, "five-point stencils cover orders up to 4");
    let stencil = |k: usize, h: f64| {
        let (m2, m1, z, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
        match k {
            1 => (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
            2 => (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h),
            3 => (-m2 + 2.0 * m1 - 2.0 * p1 + p2) / (2.0 * h * h * h),
            _ => (m2 - 4.0 * m1 + 6.0 * z - 4.0 * p1 + p2) / (h * h * h * h),
        }
    };
    let mut out = vec![f(x)];
    for (k, &h) in RICHARDSON_STEPS.iter().enumerate().take(max_order + 1).skip(1) {
        let (coarse, fine) = (stencil(k, h), stencil(k, h / 2.0));
        let gain = if k <= 2 { 16.0 } else { 4.0 };
        out.push((gain * fine - coarse) / (gain - 1.0));
    }
    out
}
