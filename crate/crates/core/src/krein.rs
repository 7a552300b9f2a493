//! Inversion for bound-state-free data driven by `S(k)` alone: the Jost
//! function is rebuilt from the scattering phase by a Cauchy integral, an
//! even convolution kernel `H` comes from `1/|f|² - 1`, a layered family of
//! convolution equations yields `a(x) = 2Γ_{2x}(2x,0)`, and `q = a² + a'`.

use num_complex::Complex64;

use crate::forward::HalfLineScatteringData;
use crate::grid::{SampledFunction, UniformGrid};
use crate::marchenko::scattering_index;
use crate::numerics::filon::{FourierPlan, FourierSymmetry};
use crate::numerics::interp::cubic_at;
use crate::numerics::nystrom::solve_second_kind;
use crate::numerics::quad::{derivative_4th, simpson_complex};
use crate::potential::RadialPotential;
use crate::{IslError, Result};

use std::f64::consts::PI;

/// Offset above the real axis at which the Cauchy integral is evaluated
/// before extrapolating to the boundary.
const CAUCHY_EPSILON: f64 = 1e-4;
/// Largest tolerated gap in the reconstruction identity `f(-k)/f(k) = S(k)`.
pub const JOST_CHECK_TOL: f64 = 1e-4;
/// Largest tolerated odd component of the convolution kernel.
pub const H_ASYMMETRY_TOL: f64 = 1e-8;

/// Numerical standing of the method's solvability conditions on this data.
#[derive(Debug, Clone, Copy)]
pub struct KreinConditions {
    /// Kernel evenness held to [`H_ASYMMETRY_TOL`].
    pub symmetry_ok: bool,
    /// Winding of `S` over the real line vanishes.
    pub index_zero: bool,
    /// Kernel decays over its tabulated span (integrability proxy).
    pub f_norms_ok: bool,
}

/// Intermediate objects of one inversion: the rebuilt Jost boundary values,
/// the convolution kernel, and the condition diagnostics.
#[derive(Debug, Clone)]
pub struct KreinWorkspace {
    /// `f(k)` on the data grid, reconstructed from the phase of `S`.
    pub f_plus: SampledFunction,
    /// `H(t)` on `[0, T]`; even extension supplies negative arguments.
    pub h: SampledFunction,
    /// Largest `|H(t) - H(-t)|` observed before symmetrization.
    pub h_asymmetry: f64,
    pub conditions: KreinConditions,
}

/// One solved convolution row on `[0, x]`.
#[derive(Debug, Clone)]
pub struct KreinRow {
    /// `Γ_x(t, 0)` at `t = 0, h, …, x`.
    pub values: Vec<f64>,
    pub condition: f64,
    pub residual: f64,
}

impl KreinRow {
    /// `Γ_x(x, 0)`, the only value the potential formula consumes.
    pub fn endpoint(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Unwrapped phase of `S` from `k_max` (where `S ≈ 1`) down to `k = 0`,
/// with the origin node pinned to zero, the branch a zero-index phase
/// returns to.
fn unwrapped_phase(data: &HalfLineScatteringData) -> Result<Vec<f64>> {
    let n = data.s_values.len();
    let mut phi = vec![0.0f64; n + 1];
    let mut prev = data.s_values[n - 1].arg();
    phi[n] = prev;
    for i in (0..n.saturating_sub(1)).rev() {
        let theta = data.s_values[i].arg();
        let mut delta = theta - prev;
        while delta > PI {
            delta -= 2.0 * PI;
        }
        while delta <= -PI {
            delta += 2.0 * PI;
        }
        if delta.abs() >= 0.9 * PI {
            return Err(IslError::BranchJump(format!(
                "S phase moves {delta:.3} rad across one grid step near k = {:.4}",
                data.k_grid.point(i)
            )));
        }
        phi[i + 1] = phi[i + 2] + delta;
        prev = theta;
    }
    Ok(phi)
}

/// Closure of the phase integral beyond the data: `φ ≈ A/y` fitted over the
/// trailing half of the range, plus a `y⁻³` remainder pinned to the actual
/// endpoint mismatch `m = φ(k_max) - A/k_max` so the logarithmic endpoint
/// singularities of the subtracted moment and the tail cancel exactly.
#[derive(Debug, Clone, Copy)]
struct PhaseTail {
    a: f64,
    m: f64,
}

/// `ln f(k + iε)` by the phase-only Cauchy formula. The real-line integral
/// folds to `-(1/π)∫₀^∞ φ(y)·y/(y² - z²)dy` with `φ` the unwrapped phase of
/// `S`; the value `φ(k)` is subtracted under the integral and restored
/// through the closed-form moment, whose branch carries the half-residue,
/// and the [`PhaseTail`] model closes the range beyond the data.
fn ln_f_at(
    phi: &[f64],
    slope: &[f64],
    grid: &UniformGrid,
    tail: PhaseTail,
    node: usize,
    eps: f64,
) -> Complex64 {
    let k = grid.point(node);
    let phi_k = phi[node];
    let z = Complex64::new(k, eps);
    let z2 = z * z;
    let y_max = grid.end();
    let mut vals = Vec::with_capacity(grid.count());
    for (j, y) in grid.points().enumerate() {
        if j == node {
            // The ε-regularized integrand dips to zero over a width ε at
            // the evaluation node itself; the boundary-value integral wants
            // the principal-value limit there.
            vals.push(Complex64::new(slope[node] * 0.5, 0.0));
        } else {
            vals.push((phi[j] - phi_k) * y / (y * y - z2));
        }
    }
    let core = simpson_complex(&vals, grid.step());
    let subtraction =
        0.5 * phi_k * ((Complex64::new(y_max * y_max, 0.0) - z2) / (-z2)).ln();
    let half_log = -0.5 / z * ((y_max - z) / (y_max + z)).ln();
    let inverse_tail = tail.a * half_log;
    // Endpoint-mismatch closure m·(2.5(Y/y)⁵ - 1.5(Y/y)³): equals m at y = Y
    // (cancelling the branch of the subtracted moment) while its own moments
    // carry no k-independent component.
    let j1 = (half_log - Complex64::new(1.0 / y_max, 0.0)) / z2;
    let j2 = (j1 - Complex64::new(1.0 / (3.0 * y_max.powi(3)), 0.0)) / z2;
    let remainder_tail =
        tail.m * y_max.powi(3) * (2.5 * y_max * y_max * j2 - 1.5 * j1);
    -(core + subtraction + inverse_tail + remainder_tail) / PI
}

/// Jost-function boundary values from the scattering matrix: the phase of
/// `S` determines `f` in `ℂ₊` when there are no bound states and the
/// winding of `S` vanishes. Evaluated at `k + iε` and `k + 2iε` with the
/// `ε → 0` limit taken by Richardson extrapolation.
pub fn jost_from_s(data: &HalfLineScatteringData) -> Result<SampledFunction> {
    if !data.bound_states.is_empty() {
        return Err(IslError::IndexNonzero(format!(
            "data carries {} bound state(s); this reconstruction needs J = 0",
            data.bound_states.len()
        )));
    }
    let phi = unwrapped_phase(data)?;
    let index = scattering_index(data)?;
    if index != 0 {
        return Err(IslError::IndexNonzero(format!(
            "winding of S over the real line is {index}, needs 0"
        )));
    }
    let k_grid = &data.k_grid;
    let n = k_grid.count();
    let grid0 = UniformGrid::new(0.0, k_grid.step(), n + 1)?;

    // φ ≈ A/y over the trailing half of the range (Hann-weighted least
    // squares), the same closure the transform layer uses.
    let window_start = grid0.nearest_index(0.5 * grid0.end()).max(1);
    let window_lo = grid0.point(window_start);
    let window_width = grid0.end() - window_lo;
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for j in window_start..grid0.count() {
        let y = grid0.point(j);
        let w = 0.5 * (1.0 - (2.0 * PI * (y - window_lo) / window_width).cos());
        num += w * phi[j] / y;
        den += w / (y * y);
    }
    let tail_a = if den > 0.0 { num / den } else { 0.0 };
    let tail = PhaseTail {
        a: tail_a,
        m: phi[n] - tail_a / grid0.end(),
    };

    // The Cauchy integrand varies on the scale of k itself near the origin,
    // so integrate on a half-step grid with the phase filled in by cubic
    // interpolation; every data node lands on an even fine node.
    let h2 = 0.5 * grid0.step();
    let fine = UniformGrid::new(0.0, h2, 2 * n + 1)?;
    let phi_fine: Vec<f64> = fine
        .points()
        .map(|y| cubic_at(&phi, grid0.step(), y))
        .collect();
    let slope_fine = derivative_4th(&phi_fine, h2);

    let mut f_values = Vec::with_capacity(n);
    for i in 0..n {
        let node = 2 * (i + 1);
        let lf_eps = ln_f_at(&phi_fine, &slope_fine, &fine, tail, node, CAUCHY_EPSILON);
        let lf_2eps = ln_f_at(
            &phi_fine,
            &slope_fine,
            &fine,
            tail,
            node,
            2.0 * CAUCHY_EPSILON,
        );
        f_values.push((2.0 * lf_eps - lf_2eps).exp());
    }
    let f = SampledFunction::new(k_grid.clone(), f_values)?;

    let mut worst = 0.0f64;
    let mut worst_k = 0.0f64;
    for (i, fv) in f.values().iter().enumerate() {
        let gap = (fv.conj() / fv - data.s_values[i]).norm();
        if gap > worst {
            worst = gap;
            worst_k = k_grid.point(i);
        }
    }
    if worst > JOST_CHECK_TOL {
        return Err(IslError::ReconstructionMismatch(format!(
            "f(-k)/f(k) misses S by {worst:.3e} at k = {worst_k:.4}"
        )));
    }
    Ok(f)
}

/// Convolution kernel `H(t) = (1/2π)∫ e^{-ikt}(1/|f(k)|² - 1)dk` tabulated
/// on `[0, t_max]`, plus the largest odd component observed before
/// symmetrization.
pub fn build_h(f: &SampledFunction, t_max: f64, t_step: f64) -> Result<(SampledFunction, f64)> {
    let k_grid = f.grid();
    let n = k_grid.count();
    if (k_grid.start() - k_grid.step()).abs() > 1e-9 * k_grid.step() {
        return Err(IslError::InvalidInput(
            "Jost samples must start one step above k = 0".into(),
        ));
    }
    let mut d = Vec::with_capacity(n + 1);
    d.push(Complex64::ZERO);
    for v in f.values() {
        let n2 = v.norm_sqr();
        if n2 < 1e-12 {
            return Err(IslError::ZeroJostFunction(format!("|f| = {:.3e}", n2.sqrt())));
        }
        d.push(Complex64::new(1.0 / n2 - 1.0, 0.0));
    }
    d[0] = 1.5 * d[1] - 0.6 * d[2] + 0.1 * d[3];
    let grid0 = UniformGrid::new(0.0, k_grid.step(), n + 1)?;
    let d = SampledFunction::new(grid0, d)?;
    // The samples are real and even in k, so the hermitian plan applies and
    // lets both signs of t be evaluated to measure the asymmetry directly.
    // |f|⁻² - 1 decays like 1/k², which pins the tail model's 1/k part.
    let plan = FourierPlan::new_inverse_square_tail(&d, FourierSymmetry::Hermitian)?;
    let t_grid = UniformGrid::from_range(0.0, t_max, t_step)?;
    let mut values = Vec::with_capacity(t_grid.count());
    let mut asymmetry = 0.0f64;
    for t in t_grid.points() {
        let plus = plan.eval(&d, t)?;
        let minus = plan.eval(&d, -t)?;
        asymmetry = asymmetry.max((plus - minus).norm());
        values.push(0.5 * (plus + minus));
    }
    if asymmetry > H_ASYMMETRY_TOL {
        return Err(IslError::CrossCheckFailure(format!(
            "kernel asymmetry {asymmetry:.3e} exceeds {H_ASYMMETRY_TOL:.1e}"
        )));
    }
    Ok((SampledFunction::new(t_grid, values)?, asymmetry))
}

/// Solve `Γ_x(t,0) + ∫₀^x H(t-u)Γ_x(u,0)du = H(t)` on `t ∈ [0,x]` with the
/// spacing of the tabulated kernel.
pub fn solve_krein(h: &SampledFunction, x: f64) -> Result<KreinRow> {
    let grid = h.grid();
    let step = grid.step();
    if !(x >= 0.0) || x > grid.end() + 1e-9 * step {
        return Err(IslError::InvalidInput(format!(
            "row endpoint {x} outside the kernel span [0, {}]",
            grid.end()
        )));
    }
    let m = (x / step).round() as usize;
    if (x - m as f64 * step).abs() > 1e-9 * step {
        return Err(IslError::InvalidInput(format!(
            "row endpoint {x} is not a multiple of the kernel spacing {step}"
        )));
    }
    let h_at = |t: f64| -> Complex64 {
        let idx = (t.abs() / step).round() as usize;
        h.value(idx)
    };
    if m == 0 {
        return Ok(KreinRow {
            values: vec![h.value(0).re],
            condition: 1.0,
            residual: 0.0,
        });
    }
    let row_grid = UniformGrid::new(0.0, step, m + 1)?;
    let rhs: Vec<Complex64> = row_grid.points().map(h_at).collect();
    let sol = solve_second_kind(&row_grid, |t, u| h_at(t - u), &rhs)?;
    Ok(KreinRow {
        values: sol.values.iter().map(|v| v.re).collect(),
        condition: sol.condition,
        residual: sol.residual,
    })
}

/// Potential on `x_grid` from the tabulated kernel: independent solves give
/// `a(x) = 2Γ_{2x}(2x, 0)`, then `q = a² + a'` with a 4th-order derivative.
pub fn recover_q_krein(h: &SampledFunction, x_grid: &UniformGrid) -> Result<RadialPotential> {
    let (q, _, _, _) = recover_with_diagnostics(h, x_grid)?;
    Ok(q)
}

fn recover_with_diagnostics(
    h: &SampledFunction,
    x_grid: &UniformGrid,
) -> Result<(RadialPotential, SampledFunction, f64, f64)> {
    if x_grid.start() != 0.0 {
        return Err(IslError::InvalidInput(
            "potential recovery starts at x = 0".into(),
        ));
    }
    if ((x_grid.step() - h.grid().step()) / h.grid().step()).abs() > 1e-9 {
        return Err(IslError::InvalidInput(format!(
            "x spacing {} must match the kernel spacing {}",
            x_grid.step(),
            h.grid().step()
        )));
    }
    if x_grid.count() < 5 {
        return Err(IslError::InvalidInput(
            "derivative of a(x) needs at least 5 nodes".into(),
        ));
    }
    let mut a = Vec::with_capacity(x_grid.count());
    let mut max_condition = 0.0f64;
    let mut max_residual = 0.0f64;
    for x in x_grid.points() {
        let row = solve_krein(h, 2.0 * x)?;
        max_condition = max_condition.max(row.condition);
        max_residual = max_residual.max(row.residual);
        a.push(2.0 * row.endpoint());
    }
    let a_prime = derivative_4th(&a, x_grid.step());
    let q: Vec<f64> = a.iter().zip(&a_prime).map(|(ai, di)| ai * ai + di).collect();
    let q = RadialPotential::new(x_grid.clone(), q, "phase-only reconstruction")?;
    let a = SampledFunction::from_real(x_grid.clone(), a)?;
    Ok((q, a, max_condition, max_residual))
}

/// Full inversion of bound-state-free scattering data.
#[derive(Debug, Clone)]
pub struct KreinInversion {
    pub workspace: KreinWorkspace,
    /// `a(x) = 2Γ_{2x}(2x, 0)` on the recovery grid.
    pub a: SampledFunction,
    pub q: RadialPotential,
    pub max_condition: f64,
    pub max_residual: f64,
}

pub fn invert_krein(
    data: &HalfLineScatteringData,
    x_max: f64,
    x_step: f64,
) -> Result<KreinInversion> {
    let f = jost_from_s(data)?;
    let x_grid = UniformGrid::from_range(0.0, x_max, x_step)?;
    let t_max = 2.0 * x_grid.end() + 2.0;
    let (h, h_asymmetry) = build_h(&f, t_max, x_grid.step())?;
    let (q, a, max_condition, max_residual) = recover_with_diagnostics(&h, &x_grid)?;

    let peak = h.max_abs();
    let tail_start = (0.8 * (h.len() - 1) as f64) as usize;
    let tail_peak = (tail_start..h.len())
        .map(|i| h.value(i).norm())
        .fold(0.0, f64::max);
    let conditions = KreinConditions {
        symmetry_ok: h_asymmetry <= H_ASYMMETRY_TOL,
        index_zero: true,
        f_norms_ok: tail_peak <= 1e-2 * peak.max(1e-300),
    };
    Ok(KreinInversion {
        workspace: KreinWorkspace {
            f_plus: f,
            h,
            h_asymmetry,
            conditions,
        },
        a,
        q,
        max_condition,
        max_residual,
    })
}
