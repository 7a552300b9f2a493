//! Closed-form oracles shared by unit tests: matching formulas for
//! piecewise-constant potentials and a reference adaptive quadrature.

use num_complex::Complex64;

use crate::forward::{BoundState, HalfLineScatteringData};
use crate::grid::UniformGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Propagate `(f, f')` across one constant piece of height `q` and width `d`
/// (from the right end to the left end).
fn step_back(f: Complex64, fp: Complex64, k: Complex64, q: f64, d: f64) -> (Complex64, Complex64) {
    let kap2 = k * k - q;
    let kap = kap2.sqrt();
    let z = kap * d;
    let (c, s_over_kap) = if z.norm() < 1e-5 {
        let z2 = kap2 * d * d;
        (
            1.0 - z2 / 2.0 + z2 * z2 / 24.0,
            d * (1.0 - z2 / 6.0 + z2 * z2 / 120.0),
        )
    } else {
        (z.cos(), z.sin() / kap)
    };
    (f * c - fp * s_over_kap, f * kap2 * s_over_kap + fp * c)
}

/// Two-region matching oracle for a single square piece `q0` on `[0, a]`:
/// returns `(f(0,k), f'(0,k))`.
pub fn well_oracle(q0: f64, a: f64, k: Complex64) -> (Complex64, Complex64) {
    piecewise_oracle(&[a], &[q0], k)
}

/// Matching oracle for a piecewise-constant potential: `heights[i]` on
/// `(breaks[i-1], breaks[i]]`, zero beyond. Independent of the ODE solver.
pub fn piecewise_oracle(breaks: &[f64], heights: &[f64], k: Complex64) -> (Complex64, Complex64) {
    let a = *breaks.last().unwrap();
    let mut f = (I * k * a).exp();
    let mut fp = I * k * f;
    for (i, (&b, &q)) in breaks.iter().zip(heights.iter()).enumerate().rev() {
        let lo = if i == 0 { 0.0 } else { breaks[i - 1] };
        let (nf, nfp) = step_back(f, fp, k, q, b - lo);
        f = nf;
        fp = nfp;
    }
    (f, fp)
}

/// `S(k)` of the square piece from the closed form.
pub fn well_s_matrix(q0: f64, a: f64, k: f64) -> Complex64 {
    let (f0, _) = well_oracle(q0, a, Complex64::new(k, 0.0));
    f0.conj() / f0
}

/// Scattering data assembled entirely from the closed form (no ODE solve).
pub fn well_data(
    q0: f64,
    a: f64,
    k_grid: &UniformGrid,
    bound_states: Vec<BoundState>,
) -> HalfLineScatteringData {
    let mut s_values = Vec::with_capacity(k_grid.count());
    let mut f0_values = Vec::with_capacity(k_grid.count());
    for k in k_grid.points() {
        let (f0, _) = well_oracle(q0, a, Complex64::new(k, 0.0));
        s_values.push(f0.conj() / f0);
        f0_values.push(f0);
    }
    HalfLineScatteringData {
        k_grid: k_grid.clone(),
        s_values,
        f0_values,
        bound_states,
    }
}

/// Adaptive Simpson quadrature, the reference for oscillatory transforms.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson3(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson3(a, fa, m, fm, flm);
        let right = simpson3(m, fm, b, fb, frm);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        recurse(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1)
    }
    // Seed with enough panels that oscillation cannot hide from the
    // adaptive refinement.
    let n = 64;
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (fa, fb, fm) = (f(lo), f(hi), f(0.5 * (lo + hi)));
        let whole = simpson3(lo, fa, hi, fb, fm);
        total += recurse(f, lo, hi, fa, fb, fm, whole, tol / n as f64, 28);
    }
    total
}
