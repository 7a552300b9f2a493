//! Adaptive Dormand-Prince 5(4) integration for small complex systems.
//!
//! Steps are clamped so requested output nodes are hit exactly; integration
//! runs forward or backward depending on the ordering of the nodes.

use num_complex::Complex64;

use crate::error::IslError;
use crate::Result;

const MAX_STEPS: usize = 2_000_000;

/// Integrate `y' = rhs(x, y)` from `record_at[0]`, returning the state at
/// every node of `record_at` (strictly monotone, either direction).
pub fn integrate<const N: usize>(
    rhs: impl Fn(f64, &[Complex64; N]) -> [Complex64; N],
    y0: [Complex64; N],
    record_at: &[f64],
    rel_tol: f64,
) -> Result<Vec<[Complex64; N]>> {
    if record_at.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(record_at.len());
    out.push(y0);
    if record_at.len() == 1 {
        return Ok(out);
    }
    let dir = (record_at[record_at.len() - 1] - record_at[0]).signum();
    if dir == 0.0 {
        return Err(IslError::InvalidInput(
            "ODE output nodes must span a nonzero interval".into(),
        ));
    }
    for w in record_at.windows(2) {
        if (w[1] - w[0]) * dir <= 0.0 {
            return Err(IslError::InvalidInput(
                "ODE output nodes must be strictly monotone".into(),
            ));
        }
    }

    let span = (record_at[record_at.len() - 1] - record_at[0]).abs();
    let mut x = record_at[0];
    let mut y = y0;
    let mut h = dir * (span / 100.0).min((record_at[1] - record_at[0]).abs());
    let mut next = 1usize;
    let atol = 1e-290;

    let mut k1 = rhs(x, &y);
    for _ in 0..MAX_STEPS {
        if next >= record_at.len() {
            return Ok(out);
        }
        let target = record_at[next];
        let mut clamped = false;
        if (x + h - target) * dir >= 0.0 {
            h = target - x;
            clamped = true;
        }
        if h.abs() < 1e-14 * (1.0 + x.abs()) {
            return Err(IslError::StepSizeUnderflow(x));
        }

        // Dormand-Prince 5(4) stages; k1 reused from the previous step (FSAL).
        let stage = |y: &[Complex64; N], ks: &[&[Complex64; N]], cs: &[f64]| {
            let mut s = *y;
            for (k, c) in ks.iter().zip(cs.iter()) {
                for i in 0..N {
                    s[i] += h * c * k[i];
                }
            }
            s
        };
        let k2 = rhs(x + h / 5.0, &stage(&y, &[&k1], &[1.0 / 5.0]));
        let k3 = rhs(
            x + 3.0 * h / 10.0,
            &stage(&y, &[&k1, &k2], &[3.0 / 40.0, 9.0 / 40.0]),
        );
        let k4 = rhs(
            x + 4.0 * h / 5.0,
            &stage(&y, &[&k1, &k2, &k3], &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0]),
        );
        let k5 = rhs(
            x + 8.0 * h / 9.0,
            &stage(
                &y,
                &[&k1, &k2, &k3, &k4],
                &[
                    19372.0 / 6561.0,
                    -25360.0 / 2187.0,
                    64448.0 / 6561.0,
                    -212.0 / 729.0,
                ],
            ),
        );
        let k6 = rhs(
            x + h,
            &stage(
                &y,
                &[&k1, &k2, &k3, &k4, &k5],
                &[
                    9017.0 / 3168.0,
                    -355.0 / 33.0,
                    46732.0 / 5247.0,
                    49.0 / 176.0,
                    -5103.0 / 18656.0,
                ],
            ),
        );
        let y5 = stage(
            &y,
            &[&k1, &k3, &k4, &k5, &k6],
            &[
                35.0 / 384.0,
                500.0 / 1113.0,
                125.0 / 192.0,
                -2187.0 / 6784.0,
                11.0 / 84.0,
            ],
        );
        let k7 = rhs(x + h, &y5);
        let y4 = stage(
            &y,
            &[&k1, &k3, &k4, &k5, &k6, &k7],
            &[
                5179.0 / 57600.0,
                7571.0 / 16695.0,
                393.0 / 640.0,
                -92097.0 / 339200.0,
                187.0 / 2100.0,
                1.0 / 40.0,
            ],
        );

        let mut err = 0.0f64;
        for i in 0..N {
            let scale = atol + rel_tol * y[i].norm().max(y5[i].norm());
            err = err.max((y5[i] - y4[i]).norm() / scale);
        }

        if err <= 1.0 {
            x += h;
            y = y5;
            k1 = k7;
            if clamped {
                // Hit the node exactly; snap x to kill rounding drift.
                x = target;
                out.push(y);
                next += 1;
            }
        }

        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
    Err(IslError::IterationBudgetExceeded(format!(
        "ODE integration exceeded {MAX_STEPS} steps near x = {x:.6e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_forward() {
        // y'' = -y integrated as a system; y(0)=0, y'(0)=1 gives sin(x).
        let nodes: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let sol = integrate(
            |_, y: &[Complex64; 2]| [y[1], -y[0]],
            [Complex64::ZERO, Complex64::new(1.0, 0.0)],
            &nodes,
            1e-11,
        )
        .unwrap();
        for (i, x) in nodes.iter().enumerate() {
            assert!(
                (sol[i][0].re - x.sin()).abs() < 1e-9,
                "x={x} got={} want={}",
                sol[i][0].re,
                x.sin()
            );
        }
    }

    #[test]
    fn complex_exponential_backward() {
        // y' = i k y integrated backward from x=1 reproduces e^{ik x}.
        let k = Complex64::new(0.0, 3.0);
        let nodes: Vec<f64> = (0..=50).map(|i| 1.0 - i as f64 * 0.02).collect();
        let y1 = (k * 1.0).exp();
        let sol = integrate(|_, y: &[Complex64; 1]| [k * y[0]], [y1], &nodes, 1e-12).unwrap();
        for (i, x) in nodes.iter().enumerate() {
            let want = (k * *x).exp();
            assert!((sol[i][0] - want).norm() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn tightening_tolerance_improves_accuracy() {
        let nodes = [0.0, 5.0];
        let run = |tol: f64| {
            let sol = integrate(
                |x, y: &[Complex64; 1]| [y[0] * Complex64::new(-x.sin() * 3.0, 0.0)],
                [Complex64::new(1.0, 0.0)],
                &nodes,
                tol,
            )
            .unwrap();
            // Exact solution exp(3(cos x - 1)).
            let want = (3.0 * ((5.0f64).cos() - 1.0)).exp();
            (sol[1][0].re - want).abs()
        };
        let coarse = run(1e-6);
        let fine = run(1e-12);
        assert!(fine < coarse.max(1e-13), "coarse={coarse} fine={fine}");
        assert!(fine < 1e-10);
    }

    #[test]
    fn rejects_non_monotone_nodes() {
        let nodes = [0.0, 1.0, 0.5];
        let r = integrate(|_, y: &[Complex64; 1]| [y[0]], [Complex64::ONE], &nodes, 1e-9);
        assert!(r.is_err());
    }
}
