//! Marchenko inversion: the kernel `F` from scattering data, the integral
//! equation `A(x,y) + ∫_x^∞ A(x,s)F(s+y)ds + F(x+y) = 0` solved row by row,
//! the potential from `q = -2 dA(x,x)/dx`, and data characterization.

use num_complex::Complex64;

use crate::forward::HalfLineScatteringData;
use crate::grid::{SampledFunction, UniformGrid};
use crate::kernel::{KernelOrientation, TriangularKernel};
use crate::numerics::filon::{FourierPlan, FourierSymmetry};
use crate::numerics::nystrom::solve_second_kind;
use crate::numerics::quad::{simpson, trapezoid};
use crate::numerics::winding::winding_number;
use crate::potential::RadialPotential;
use crate::{IslError, Result};

/// Floor for the adaptive `|F|` truncation threshold.
pub const TRUNCATION_FLOOR: f64 = 1e-8;

/// One solved row `A(x, ·)` with the solver diagnostics.
#[derive(Debug, Clone)]
pub struct MarchenkoRow {
    /// Values at `y = x, x + h, …, y_end`.
    pub values: Vec<f64>,
    pub condition: f64,
    pub residual: f64,
}

/// Result of a full inversion: the triangular kernel, the recovered
/// potential, and the diagnostics that qualify them.
#[derive(Debug, Clone)]
pub struct MarchenkoInversion {
    pub kernel: TriangularKernel,
    pub q: RadialPotential,
    pub f_values: SampledFunction,
    /// `|F|` level treated as zero when the upper limit is truncated.
    pub truncation_threshold: f64,
    /// Node beyond which `|F|` stays at or below the threshold.
    pub truncation_point: f64,
    /// Whether the truncation point landed strictly inside the sampled span;
    /// false means rows were cut by the window, not by decay of `F`.
    pub threshold_met: bool,
    pub max_condition: f64,
    pub max_residual: f64,
}

/// Data characterization: index of `S` against the bound-state count, the
/// unitarity defect, and the integrability of `F` that unique solvability
/// requires.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterizationReport {
    pub index: i64,
    pub index_expected: i64,
    pub symmetry_residual: f64,
    pub f_sup_norm: f64,
    pub f_l1_norm: f64,
    pub x_fprime_l1_norm: f64,
    pub passed: bool,
}

fn check_data_shape(data: &HalfLineScatteringData) -> Result<()> {
    let k = &data.k_grid;
    if (k.start() - k.step()).abs() > 1e-9 * k.step() {
        return Err(IslError::InvalidInput(format!(
            "transform needs k_min = k_step so the grid extends to k = 0; got k_min = {}, k_step = {}",
            k.start(),
            k.step()
        )));
    }
    if data.s_values.len() < 3 {
        return Err(IslError::InvalidInput(
            "need at least 3 scattering samples".into(),
        ));
    }
    Ok(())
}

/// `S` extrapolated to `k = 0` (quadratically, from the first three samples).
fn s_at_origin(data: &HalfLineScatteringData) -> Complex64 {
    3.0 * data.s_values[0] - 3.0 * data.s_values[1] + data.s_values[2]
}

/// `1 - S` extended to `k = 0`, on the grid that includes the origin.
fn one_minus_s_from_zero(data: &HalfLineScatteringData) -> Result<SampledFunction> {
    check_data_shape(data)?;
    let g: Vec<Complex64> = data.s_values.iter().map(|s| 1.0 - s).collect();
    let mut ext = Vec::with_capacity(g.len() + 1);
    ext.push(3.0 * g[0] - 3.0 * g[1] + g[2]);
    ext.extend_from_slice(&g);
    SampledFunction::new(UniformGrid::new(0.0, data.k_grid.step(), ext.len())?, ext)
}

/// `F(x) = (1/2π)∫(1-S(k))e^{ikx}dk + Σ_j s_j e^{-k_j x}` on `x_grid`.
pub fn build_f_function(
    data: &HalfLineScatteringData,
    x_grid: &UniformGrid,
) -> Result<SampledFunction> {
    let g = one_minus_s_from_zero(data)?;
    let plan = FourierPlan::new(&g, FourierSymmetry::Hermitian)?;
    let mut values = Vec::with_capacity(x_grid.count());
    for x in x_grid.points() {
        // The kernel lives on x ≥ 0; at the origin the transform is the
        // limit from above, not the symmetric midpoint value.
        let mut f = if x == 0.0 {
            plan.eval_at_zero_from_above(&g)?.re
        } else {
            plan.eval(&g, x)?.re
        };
        for b in &data.bound_states {
            f += b.s * (-b.k * x).exp();
        }
        values.push(f);
    }
    SampledFunction::from_real(x_grid.clone(), values)
}

/// Noise level of a computed `F`: the largest magnitude over the last tenth
/// of its domain, where the kernel of a compactly supported potential has
/// already vanished.
pub fn tail_noise(f: &SampledFunction) -> f64 {
    let n = f.len();
    let from = n - (n / 10).max(1);
    (from..n).map(|i| f.value(i).norm()).fold(0.0, f64::max)
}

/// Smallest node beyond which `|F|` stays at or below `threshold`; falls
/// back to the end of the domain when the tail never settles.
pub fn truncation_point(f: &SampledFunction, threshold: f64) -> f64 {
    let n = f.len();
    let mut cut = n - 1;
    for i in (0..n).rev() {
        if f.value(i).norm() > threshold {
            break;
        }
        cut = i;
    }
    f.grid().point(cut)
}

/// Solve one row of the integral equation on `y ∈ [x, y_end]`, truncating
/// the infinite upper limit at `y_end`. Both `x` and `y_end` must be nodes
/// of the grid `F` is sampled on, and `F` must reach `2·y_end`.
pub fn solve_marchenko(f: &SampledFunction, x: f64, y_end: f64) -> Result<MarchenkoRow> {
    let h = f.grid().step();
    let i_x = f
        .grid()
        .index_at(x)
        .ok_or_else(|| IslError::InvalidInput(format!("x = {x} is not a node of F's grid")))?;
    let i_end = f.grid().index_at(y_end).ok_or_else(|| {
        IslError::InvalidInput(format!("y_end = {y_end} is not a node of F's grid"))
    })?;
    if i_end < i_x + 4 {
        return Err(IslError::InvalidInput(format!(
            "row [{x}, {y_end}] has fewer than 5 nodes"
        )));
    }
    if 2 * i_end > f.len() - 1 {
        return Err(IslError::InvalidInput(format!(
            "kernel needs F up to {}, but F is sampled to {}",
            2.0 * y_end,
            f.grid().end()
        )));
    }
    let row_grid = UniformGrid::new(x, h, i_end - i_x + 1)?;
    let lookup = |t: f64| -> Complex64 {
        let idx = (t / h).round() as usize;
        f.value(idx)
    };
    let rhs: Vec<Complex64> = (0..row_grid.count())
        .map(|j| -f.value(2 * i_x + j))
        .collect();
    let sol = solve_second_kind(&row_grid, |t, s| lookup(t + s), &rhs)?;
    Ok(MarchenkoRow {
        values: sol.values.iter().map(|v| v.re).collect(),
        condition: sol.condition,
        residual: sol.residual,
    })
}

/// Full inversion: `F` on `[0, 2(x_max + 2)]`, one row per node of the
/// `x`-grid, potential from the diagonal derivative.
pub fn invert_marchenko(
    data: &HalfLineScatteringData,
    x_max: f64,
    x_step: f64,
) -> Result<MarchenkoInversion> {
    check_data_shape(data)?;
    if s_at_origin(data).re < 0.0 {
        return Err(IslError::InvalidInput(
            "scattering matrix tends to -1 at k = 0 (zero-energy resonance); inversion is \
             restricted to data with S(0) = +1"
                .into(),
        ));
    }
    let x_grid = UniformGrid::from_range(0.0, x_max, x_step)?;
    let h = x_grid.step();
    let span = 2.0 * (x_max + 2.0);
    let n_f = (span / h - 1e-9).ceil() as usize;
    let f_grid = UniformGrid::new(0.0, h, n_f + 1)?;
    let f = build_f_function(data, &f_grid)?;

    let threshold = TRUNCATION_FLOOR.max(3.0 * tail_noise(&f));
    let cut = truncation_point(&f, threshold);
    let half_end = f_grid.point((f_grid.count() - 1) / 2);
    let threshold_met = cut < half_end;

    let mut rows = Vec::with_capacity(x_grid.count());
    let mut max_condition = 0.0f64;
    let mut max_residual = 0.0f64;
    for i in 0..x_grid.count() {
        let x = x_grid.point(i);
        let wanted = cut.max(x + 20.0 * h).min(half_end);
        let y_end = f_grid.point(f_grid.nearest_index(wanted));
        let row = solve_marchenko(&f, x, y_end)?;
        max_condition = max_condition.max(row.condition);
        max_residual = max_residual.max(row.residual);
        rows.push(row.values);
    }
    let kernel = TriangularKernel::new(x_grid, rows, KernelOrientation::Outward)?;
    let q = kernel.recover_potential(-2.0, "marchenko reconstruction")?;
    Ok(MarchenkoInversion {
        kernel,
        q,
        f_values: f,
        truncation_threshold: threshold,
        truncation_point: cut,
        threshold_met,
        max_condition,
        max_residual,
    })
}

/// Index of `S` along the real line: winding of the hermitian extension
/// `S(-k) = conj(S(k))` through its limit at `k = 0`, closed at `±k_max`.
pub fn scattering_index(data: &HalfLineScatteringData) -> Result<i64> {
    check_data_shape(data)?;
    let origin = if s_at_origin(data).re < 0.0 {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let n = data.s_values.len();
    let mut contour = Vec::with_capacity(2 * n + 1);
    for i in (0..n).rev() {
        contour.push(data.s_values[i].conj());
    }
    contour.push(origin);
    contour.extend_from_slice(&data.s_values);
    winding_number(&contour)
}

/// Characterization of scattering data: index against the bound-state
/// count, unitarity defect, and the norms of `F` that unique solvability
/// needs (with `F'` by central differences).
pub fn characterize(data: &HalfLineScatteringData) -> Result<CharacterizationReport> {
    check_data_shape(data)?;
    let j = data.bound_states.len() as i64;
    let index_expected = if s_at_origin(data).re < 0.0 {
        -2 * j - 1
    } else {
        -2 * j
    };
    let index = scattering_index(data)?;

    let symmetry_residual = data
        .s_values
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0, f64::max);

    let f_grid = UniformGrid::from_range(0.0, 12.0, 0.02)?;
    let f = build_f_function(data, &f_grid)?;
    let fv: Vec<f64> = f.values().iter().map(|v| v.re).collect();
    let h = f_grid.step();
    let f_sup_norm = fv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let f_l1_norm = trapezoid(&fv.iter().map(|v| v.abs()).collect::<Vec<_>>(), h);
    let mut xfp = vec![0.0; fv.len()];
    for i in 0..fv.len() {
        let d = if i == 0 {
            (fv[1] - fv[0]) / h
        } else if i == fv.len() - 1 {
            (fv[i] - fv[i - 1]) / h
        } else {
            (fv[i + 1] - fv[i - 1]) / (2.0 * h)
        };
        xfp[i] = f_grid.point(i) * d.abs();
    }
    let x_fprime_l1_norm = trapezoid(&xfp, h);

    let discrete_ok = data.bound_states.iter().all(|b| b.k > 0.0 && b.s > 0.0)
        && data.bound_states.windows(2).all(|w| w[0].k > w[1].k);
    let passed = index == index_expected
        && symmetry_residual <= 1e-6
        && f_sup_norm.is_finite()
        && f_l1_norm.is_finite()
        && x_fprime_l1_norm.is_finite()
        && discrete_ok;
    Ok(CharacterizationReport {
        index,
        index_expected,
        symmetry_residual,
        f_sup_norm,
        f_l1_norm,
        x_fprime_l1_norm,
        passed,
    })
}

/// Residual of the identity satisfied by the boundary row `A = A(0,·)`:
/// `F(y) + A(y) + ∫₀^∞ A(t)F(t+y)dt = 0` for `y ≥ 0`, with `A` extended by
/// zero past its sampled span. Returns the sup over the nodes of `A`'s grid;
/// the integral uses Simpson quadrature, independent of the row solver.
pub fn check_a0_identity(a0: &SampledFunction, f: &SampledFunction) -> Result<f64> {
    let h = a0.grid().step();
    if a0.grid().start().abs() > 1e-9 * h || f.grid().start().abs() > 1e-9 * h {
        return Err(IslError::InvalidInput(
            "the boundary identity needs both functions sampled from 0".into(),
        ));
    }
    if (f.grid().step() - h).abs() > 1e-9 * h {
        return Err(IslError::InvalidInput(format!(
            "grid steps differ: {} vs {}",
            h,
            f.grid().step()
        )));
    }
    let n = a0.len();
    if 2 * (n - 1) > f.len() - 1 {
        return Err(IslError::InvalidInput(
            "F is not sampled far enough for the identity integral".into(),
        ));
    }
    let mut worst = 0.0f64;
    let mut prod = vec![0.0; n];
    for jy in 0..n {
        for (jt, p) in prod.iter_mut().enumerate() {
            *p = a0.value(jt).re * f.value(jt + jy).re;
        }
        let integral = simpson(&prod, h);
        let residual = f.value(jy).re + a0.value(jy).re + integral;
        worst = worst.max(residual.abs());
    }
    Ok(worst)
}
