//! Non-oscillatory quadrature and finite-difference stencils on uniform grids.

use num_complex::Complex64;

/// Composite trapezoidal rule with spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * (values[0] + values[values.len() - 1]) + interior)
}

pub fn trapezoid_complex(values: &[Complex64], h: f64) -> Complex64 {
    if values.len() < 2 {
        return Complex64::ZERO;
    }
    let mut acc = 0.5 * (values[0] + values[values.len() - 1]);
    for v in &values[1..values.len() - 1] {
        acc += v;
    }
    acc * h
}

/// Composite Simpson rule with spacing `h`; an odd interval count is closed
/// with the 3/8 rule on the final three cells.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return trapezoid(values, h);
    }
    let intervals = n - 1;
    let (simpson_end, mut total) = if intervals % 2 == 0 {
        (n - 1, 0.0)
    } else if n >= 4 {
        // 3/8 rule on the last three intervals keeps the composite 4th order.
        let tail = 3.0 * h / 8.0
            * (values[n - 4] + 3.0 * values[n - 3] + 3.0 * values[n - 2] + values[n - 1]);
        (n - 4, tail)
    } else {
        return trapezoid(values, h);
    };
    if simpson_end >= 2 {
        let mut acc = values[0] + values[simpson_end];
        let mut i = 1;
        while i < simpson_end {
            acc += 4.0 * values[i];
            if i + 1 < simpson_end {
                acc += 2.0 * values[i + 1];
            }
            i += 2;
        }
        total += acc * h / 3.0;
    }
    total
}

/// [`simpson`] for complex samples.
pub fn simpson_complex(values: &[Complex64], h: f64) -> Complex64 {
    let n = values.len();
    if n < 2 {
        return Complex64::ZERO;
    }
    if n == 2 {
        return trapezoid_complex(values, h);
    }
    let intervals = n - 1;
    let (simpson_end, mut total) = if intervals % 2 == 0 {
        (n - 1, Complex64::ZERO)
    } else if n >= 4 {
        let tail = 3.0 * h / 8.0
            * (values[n - 4] + 3.0 * values[n - 3] + 3.0 * values[n - 2] + values[n - 1]);
        (n - 4, tail)
    } else {
        return trapezoid_complex(values, h);
    };
    if simpson_end >= 2 {
        let mut acc = values[0] + values[simpson_end];
        let mut i = 1;
        while i < simpson_end {
            acc += 4.0 * values[i];
            if i + 1 < simpson_end {
                acc += 2.0 * values[i + 1];
            }
            i += 2;
        }
        total += acc * (h / 3.0);
    }
    total
}

/// Integral of `x^n * f(x)` where `f` is the piecewise-linear interpolant of
/// `values` on the grid `x_i = start + i*h`. Exact per cell, so polynomial
/// moments of piecewise-linear data carry no quadrature error.
pub fn power_moment_piecewise_linear(start: f64, h: f64, values: &[f64], n: u32) -> f64 {
    let mut total = 0.0;
    for i in 0..values.len().saturating_sub(1) {
        let x0 = start + h * i as f64;
        let x1 = x0 + h;
        total += cell_power_moment(x0, x1, values[i], values[i + 1], n);
    }
    total
}

/// Same as [`power_moment_piecewise_linear`] with `f` replaced by `|f|`;
/// cells where the interpolant changes sign are split at the zero crossing.
pub fn abs_power_moment_piecewise_linear(start: f64, h: f64, values: &[f64], n: u32) -> f64 {
    let mut total = 0.0;
    for i in 0..values.len().saturating_sub(1) {
        let x0 = start + h * i as f64;
        let x1 = x0 + h;
        let (q0, q1) = (values[i], values[i + 1]);
        if q0 * q1 >= 0.0 {
            total += cell_power_moment(x0, x1, q0.abs(), q1.abs(), n);
        } else {
            let xz = x0 + h * q0 / (q0 - q1);
            total += cell_power_moment(x0, xz, q0.abs(), 0.0, n);
            total += cell_power_moment(xz, x1, 0.0, q1.abs(), n);
        }
    }
    total
}

/// Exact `∫_{x0}^{x1} x^n (linear through (x0,q0),(x1,q1)) dx`.
fn cell_power_moment(x0: f64, x1: f64, q0: f64, q1: f64, n: u32) -> f64 {
    if x1 <= x0 {
        return 0.0;
    }
    let beta = (q1 - q0) / (x1 - x0);
    let alpha = q0 - beta * x0;
    let p1 = (x1.powi(n as i32 + 1) - x0.powi(n as i32 + 1)) / (n as f64 + 1.0);
    let p2 = (x1.powi(n as i32 + 2) - x0.powi(n as i32 + 2)) / (n as f64 + 2.0);
    alpha * p1 + beta * p2
}

/// 4th-order first derivative of uniform samples (5-point stencils, one-sided
/// at the edges). Needs at least 5 samples.
pub fn derivative_4th(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "4th-order differentiation needs at least 5 samples");
    let mut d = vec![0.0; n];
    let c = 1.0 / (12.0 * h);
    d[0] = c * (-25.0 * values[0] + 48.0 * values[1] - 36.0 * values[2] + 16.0 * values[3]
        - 3.0 * values[4]);
    d[1] = c * (-3.0 * values[0] - 10.0 * values[1] + 18.0 * values[2] - 6.0 * values[3]
        + values[4]);
    for i in 2..n - 2 {
        d[i] = c * (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2]);
    }
    d[n - 2] = c * (3.0 * values[n - 1] + 10.0 * values[n - 2] - 18.0 * values[n - 3]
        + 6.0 * values[n - 4]
        - values[n - 5]);
    d[n - 1] = c * (25.0 * values[n - 1] - 48.0 * values[n - 2] + 36.0 * values[n - 3]
        - 16.0 * values[n - 4]
        + 3.0 * values[n - 5]);
    d
}
