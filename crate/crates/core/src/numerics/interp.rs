//! Polynomial interpolation of uniformly sampled data.

/// Piecewise-cubic (4-point Lagrange) interpolation on the uniform grid
/// `x_i = i·h`; exact at the nodes, one-sided stencils at the edges. Needs
/// at least 4 samples.
pub fn cubic_at(vals: &[f64], h: f64, x: f64) -> f64 {
    let n = vals.len();
    debug_assert!(n >= 4, "cubic interpolation needs at least 4 samples");
    let t = x / h;
    let i1 = (t.floor() as isize).clamp(1, n as isize - 3) as usize;
    let s = t - i1 as f64;
    let w_m1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    let w_0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    let w_1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    let w_2 = (s + 1.0) * s * (s - 1.0) / 6.0;
    w_m1 * vals[i1 - 1] + w_0 * vals[i1] + w_1 * vals[i1 + 1] + w_2 * vals[i1 + 2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly_between_nodes() {
        let h = 0.3;
        let f = |x: f64| 2.0 - x + 0.5 * x * x - 0.125 * x * x * x;
        let vals: Vec<f64> = (0..9).map(|i| f(i as f64 * h)).collect();
        for x in [0.0, 0.11, 0.45, 1.0, 1.77, 2.39, 2.4] {
            assert!((cubic_at(&vals, h, x) - f(x)).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn edge_stencils_stay_fourth_order() {
        let h = 0.1;
        let vals: Vec<f64> = (0..12).map(|i| (i as f64 * h).sin()).collect();
        for x in [0.02, 1.08] {
            assert!((cubic_at(&vals, h, x) - x.sin()).abs() < 1e-6, "x={x}");
        }
    }
}
