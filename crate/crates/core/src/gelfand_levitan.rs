//! Spectral-measure inversion: the measure from forward data, the input
//! kernel `L(x,y) = ∫ φ₀(x,λ)φ₀(y,λ)dσ(λ)`, the layer equation
//! `K(x,y) + ∫₀^x K(x,s)L(s,y)ds + L(x,y) = 0` on `[0,x]`, and the
//! potential from `q = 2 dK(x,x)/dx`.

use num_complex::Complex64;

use crate::forward::{bound_states, jost_function, regular_solution};
use crate::grid::{SampledFunction, UniformGrid};
use crate::kernel::{KernelOrientation, TriangularKernel};
use crate::numerics::filon::{FourierPlan, FourierSymmetry};
use crate::numerics::interp::cubic_at;
use crate::numerics::linalg::smallest_eigenvalue_symmetric;
use crate::numerics::nystrom::solve_second_kind;
use crate::numerics::quad::simpson;
use crate::potential::RadialPotential;
use crate::{IslError, Result};

use std::f64::consts::PI;

/// λ-resolution of measures built by [`spectral_from_potential`].
pub const LAMBDA_STEP: f64 = 0.1;
/// Wavenumber spacing at which the Jost function is sampled when a measure
/// is built from a potential.
const K_SAMPLE_STEP: f64 = 0.05;
/// Wavenumber spacing of the resampled density deviation used for the
/// kernel transform.
const K_RESAMPLE_STEP: f64 = 0.025;
/// Floor for the positivity proxy: the smallest eigenvalue of every
/// discretized `I + L` triangle must stay above this.
pub const OPERATOR_FLOOR: f64 = 1e-8;

/// One negative-energy point mass of a spectral measure: `λ = -κ²` with
/// weight `c = 1/‖φ(·,λ)‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralAtom {
    pub lambda: f64,
    pub c: f64,
}

/// Spectral measure of a half-line problem: continuous density `w(λ)` on
/// `[0, Λ_max]` plus finitely many negative atoms.
#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    pub lambda_grid: UniformGrid,
    pub density: Vec<f64>,
    pub atoms: Vec<SpectralAtom>,
}

/// Regular solution `φ(·,λ)` (`φ(0) = 0`, `φ'(0) = 1`) sampled on the
/// potential grid, with its squared norm.
#[derive(Debug, Clone)]
pub struct RegularSolutionEval {
    pub lambda: f64,
    pub profile: SampledFunction,
    /// `∫ φ² dx` over the sampled span; for `λ < 0` the decaying tail past
    /// the grid is added in closed form, making this the full `L²` norm at
    /// bound-state energies.
    pub norm_sq: f64,
}

impl SpectralMeasure {
    pub fn new(
        lambda_grid: UniformGrid,
        density: Vec<f64>,
        atoms: Vec<SpectralAtom>,
    ) -> Result<Self> {
        if lambda_grid.start().abs() > 1e-12 {
            return Err(IslError::InvalidInput(format!(
                "spectral density must be sampled from λ = 0, got start {}",
                lambda_grid.start()
            )));
        }
        if lambda_grid.count() < 4 {
            return Err(IslError::InvalidInput(
                "spectral density needs at least 4 samples".into(),
            ));
        }
        if density.len() != lambda_grid.count() {
            return Err(IslError::InvalidInput(format!(
                "density has {} values for {} λ nodes",
                density.len(),
                lambda_grid.count()
            )));
        }
        if density.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(IslError::InvalidInput(
                "spectral density must be finite and nonnegative".into(),
            ));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !(a.lambda < 0.0) || !(a.c > 0.0) {
                return Err(IslError::InvalidInput(format!(
                    "atom {i} must have λ < 0 and c > 0, got λ = {}, c = {}",
                    a.lambda, a.c
                )));
            }
            for b in &atoms[..i] {
                if (a.lambda - b.lambda).abs() < 1e-12 {
                    return Err(IslError::InvalidInput(format!(
                        "atoms must sit at distinct energies; λ = {} repeats",
                        a.lambda
                    )));
                }
            }
        }
        Ok(SpectralMeasure {
            lambda_grid,
            density,
            atoms,
        })
    }

    /// Reference density `w₀(λ) = √λ/π` of the zero potential.
    pub fn reference_density(lambda: f64) -> f64 {
        lambda.max(0.0).sqrt() / PI
    }

    /// Measure with `w = w₀` and no atoms.
    pub fn free(lambda_max: f64) -> Result<Self> {
        let grid = UniformGrid::from_range(0.0, lambda_max, LAMBDA_STEP)?;
        let density = grid.points().map(Self::reference_density).collect();
        SpectralMeasure::new(grid, density, Vec::new())
    }

    /// `|w - w₀|` at the last λ node, the truncation indicator recorded by
    /// reports.
    pub fn endpoint_deviation(&self) -> f64 {
        let last = self.lambda_grid.count() - 1;
        (self.density[last] - Self::reference_density(self.lambda_grid.point(last))).abs()
    }

    /// The deviation `d(k) = π·w(k²)/k - 1` resampled on a uniform
    /// wavenumber grid from `k = 0`, the even-real input of the kernel
    /// transform. `w/√λ` is interpolated (it is smooth through λ = 0,
    /// unlike `w` itself).
    pub fn deviation_samples(&self, k_step: f64) -> Result<SampledFunction> {
        let lg = &self.lambda_grid;
        let n = lg.count();
        let dl = lg.step();
        let mut v = vec![0.0f64; n];
        for i in 1..n {
            v[i] = self.density[i] / lg.point(i).sqrt();
        }
        v[0] = 3.0 * v[1] - 3.0 * v[2] + v[3];
        let k_max = lg.end().sqrt();
        let k_grid = UniformGrid::from_range(0.0, k_max, k_step)?;
        let values: Vec<Complex64> = k_grid
            .points()
            .map(|k| Complex64::new(PI * cubic_at(&v, dl, k * k) - 1.0, 0.0))
            .collect();
        SampledFunction::new(k_grid, values)
    }
}

/// `φ₀(x,λ)`: `sin(x√λ)/√λ`, `x`, or `sinh(x√-λ)/√-λ` by the sign of `λ`.
fn phi0(x: f64, lambda: f64) -> f64 {
    if lambda > 0.0 {
        let k = lambda.sqrt();
        (k * x).sin() / k
    } else if lambda < 0.0 {
        let kappa = (-lambda).sqrt();
        (kappa * x).sinh() / kappa
    } else {
        x
    }
}

/// Regular solution at energy `λ` with its norm; the ODE is integrated on
/// the potential grid with `φ(0) = 0`, `φ'(0) = 1`.
pub fn regular_solution_eval(q: &RadialPotential, lambda: f64) -> Result<RegularSolutionEval> {
    let k = if lambda >= 0.0 {
        Complex64::new(lambda.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-lambda).sqrt())
    };
    let sol = regular_solution(q, k)?;
    let phis: Vec<f64> = sol.values.iter().map(|v| v.re).collect();
    let squares: Vec<f64> = phis.iter().map(|p| p * p).collect();
    let grid = q.grid().clone();
    let mut norm_sq = simpson(&squares, grid.step());
    if lambda < 0.0 {
        let kappa = (-lambda).sqrt();
        norm_sq += phis[phis.len() - 1].powi(2) / (2.0 * kappa);
    }
    Ok(RegularSolutionEval {
        lambda,
        profile: SampledFunction::from_real(grid, phis)?,
        norm_sq,
    })
}

/// Spectral measure of a potential: `w(λ) = √λ/(π|f(√λ)|²)` on `[0, Λ_max]`
/// plus one atom per bound state with `c_j = 1/‖φ(·,λ_j)‖²`.
pub fn spectral_from_potential(q: &RadialPotential, lambda_max: f64) -> Result<SpectralMeasure> {
    if !(lambda_max >= 1.0) || !lambda_max.is_finite() {
        return Err(IslError::InvalidInput(format!(
            "measure needs a finite λ range of at least 1, got {lambda_max}"
        )));
    }
    let k_max = lambda_max.sqrt();
    let k_grid = UniformGrid::from_range(K_SAMPLE_STEP, k_max, K_SAMPLE_STEP)?;
    // 1/(π|f(k)|²) sampled in k, then extended to k = 0 quadratically in
    // λ = k² (|f|² is even in k, so the expansion has only even powers).
    let mut e = Vec::with_capacity(k_grid.count() + 1);
    e.push(0.0);
    for k in k_grid.points() {
        let jost = jost_function(q, Complex64::new(k, 0.0))?;
        let n2 = jost.f0.norm_sqr();
        if n2 < 1e-12 {
            return Err(IslError::ZeroJostFunction(format!(
                "f({k:.8}) = {:.3e}",
                n2.sqrt()
            )));
        }
        e.push(1.0 / (PI * n2));
    }
    e[0] = 1.5 * e[1] - 0.6 * e[2] + 0.1 * e[3];
    let ek_step = k_grid.step();

    let lambda_grid = UniformGrid::from_range(0.0, lambda_max, LAMBDA_STEP)?;
    let density: Vec<f64> = lambda_grid
        .points()
        .map(|l| l.sqrt() * cubic_at(&e, ek_step, l.sqrt()))
        .collect();

    let min_q = q.samples().iter().cloned().fold(0.0f64, f64::min);
    let kappa_max = (-min_q).max(0.0).sqrt() + 1.0;
    let mut atoms = Vec::new();
    for kappa in bound_states(q, kappa_max)? {
        let lambda = -kappa * kappa;
        let eval = regular_solution_eval(q, lambda)?;
        atoms.push(SpectralAtom {
            lambda,
            c: 1.0 / eval.norm_sq,
        });
    }
    SpectralMeasure::new(lambda_grid, density, atoms)
}

/// Input kernel of the layer equation at a single point:
/// `L(x,y) = ∫ φ₀(x,λ)φ₀(y,λ)dσ(λ)` with `dσ = (w-w₀)dλ + atoms`. The
/// continuous part reduces, via `λ = k²`, to cosine transforms of the
/// deviation `d(k)`: `L = H(|x-y|) - H(x+y)` with
/// `H(t) = (1/π)∫₀^∞ d(k)cos(kt)dk`.
pub fn build_l(measure: &SpectralMeasure, x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 {
        return Err(IslError::InvalidInput(format!(
            "kernel arguments must be nonnegative, got ({x}, {y})"
        )));
    }
    let d = measure.deviation_samples(K_RESAMPLE_STEP)?;
    let plan = FourierPlan::new_inverse_square_tail(&d, FourierSymmetry::EvenReal)?;
    let h_diff = plan.eval(&d, (x - y).abs())?.re;
    let h_sum = plan.eval(&d, x + y)?.re;
    Ok(h_diff - h_sum + atom_sum(&measure.atoms, x, y))
}

fn atom_sum(atoms: &[SpectralAtom], x: f64, y: f64) -> f64 {
    atoms
        .iter()
        .map(|a| a.c * phi0(x, a.lambda) * phi0(y, a.lambda))
        .sum()
}

/// Tabulated input kernel: `H` precomputed on a uniform argument grid so the
/// row solver can evaluate `L` at node pairs without re-running the
/// transform.
#[derive(Debug, Clone)]
pub struct GlKernelTable {
    h_values: SampledFunction,
    atoms: Vec<SpectralAtom>,
}

impl GlKernelTable {
    /// Tabulates `H` on `[0, t_max]` with step `t_step`; `t_max` must cover
    /// `x + y` for every pair the solver will request.
    pub fn new(measure: &SpectralMeasure, t_max: f64, t_step: f64) -> Result<Self> {
        let d = measure.deviation_samples(K_RESAMPLE_STEP)?;
        let plan = FourierPlan::new_inverse_square_tail(&d, FourierSymmetry::EvenReal)?;
        let t_grid = UniformGrid::from_range(0.0, t_max, t_step)?;
        let mut values = Vec::with_capacity(t_grid.count());
        for t in t_grid.points() {
            values.push(plan.eval(&d, t)?);
        }
        Ok(GlKernelTable {
            h_values: SampledFunction::new(t_grid, values)?,
            atoms: measure.atoms.clone(),
        })
    }

    /// `L(x,y)`; both `|x-y|` and `x+y` must land on the tabulated grid.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let grid = self.h_values.grid();
        let at = |t: f64| -> Result<f64> {
            let i = grid.index_at(t).ok_or_else(|| {
                IslError::InvalidInput(format!(
                    "kernel table has no node at argument {t} (step {})",
                    grid.step()
                ))
            })?;
            Ok(self.h_values.value(i).re)
        };
        Ok(at((x - y).abs())? - at(x + y)? + atom_sum(&self.atoms, x, y))
    }
}

/// One solved row `K(x,·)` on `[0,x]` with the solver diagnostics and the
/// positivity proxy of its triangle.
#[derive(Debug, Clone)]
pub struct GlRow {
    /// Values at `y = 0, h, …, x`.
    pub values: Vec<f64>,
    pub condition: f64,
    pub residual: f64,
    /// Smallest eigenvalue of the symmetrized discrete `I + L` operator.
    pub operator_floor: f64,
}

/// Solve `K(x,y) + ∫₀^x K(x,s)L(s,y)ds = -L(x,y)` on `y ∈ [0,x]` with
/// trapezoid weights at spacing `step`.
pub fn solve_gl(l: impl Fn(f64, f64) -> Result<f64>, x: f64, step: f64) -> Result<GlRow> {
    if !(x >= 0.0) || !(step > 0.0) {
        return Err(IslError::InvalidInput(format!(
            "row solve needs x ≥ 0 and step > 0, got x = {x}, step = {step}"
        )));
    }
    let m = (x / step).round() as usize;
    if (x - m as f64 * step).abs() > 1e-9 * step {
        return Err(IslError::InvalidInput(format!(
            "row endpoint {x} is not a multiple of the step {step}"
        )));
    }
    if m == 0 {
        return Ok(GlRow {
            values: vec![-l(0.0, 0.0)?],
            condition: 1.0,
            residual: 0.0,
            operator_floor: 1.0,
        });
    }
    let grid = UniformGrid::new(0.0, step, m + 1)?;
    let n = grid.count();
    let mut l_nodes = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = l(grid.point(i), grid.point(j))?;
            l_nodes[i * n + j] = v;
            l_nodes[j * n + i] = v;
        }
    }
    let mut rhs = Vec::with_capacity(n);
    for j in 0..n {
        rhs.push(Complex64::new(-l(x, grid.point(j))?, 0.0));
    }
    let sol = solve_second_kind(
        &grid,
        |t, s| {
            let i = ((t / step).round()) as usize;
            let j = ((s / step).round()) as usize;
            Complex64::new(l_nodes[i * n + j], 0.0)
        },
        &rhs,
    )?;
    let weight = |j: usize| if j == 0 || j == n - 1 { 0.5 * step } else { step };
    let mut sym = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            let base = (weight(i) * weight(j)).sqrt() * l_nodes[i * n + j];
            sym[i * n + j] = base + if i == j { 1.0 } else { 0.0 };
        }
    }
    let floor = smallest_eigenvalue_symmetric(&sym, n);
    Ok(GlRow {
        values: sol.values.iter().map(|v| v.re).collect(),
        condition: sol.condition,
        residual: sol.residual,
        operator_floor: floor,
    })
}

/// Potential from an inward kernel diagonal: `q = 2 dK(x,x)/dx`.
pub fn recover_q_gl(kernel: &TriangularKernel) -> Result<RadialPotential> {
    if kernel.orientation() != KernelOrientation::Inward {
        return Err(IslError::InvalidInput(
            "this recovery differentiates an inward (lower-triangle) kernel".into(),
        ));
    }
    kernel.recover_potential(2.0, "spectral reconstruction")
}

/// Full inversion of a spectral measure on `[0, x_max]`.
#[derive(Debug, Clone)]
pub struct GlInversion {
    pub kernel: TriangularKernel,
    pub q: RadialPotential,
    /// Smallest `I + L` eigenvalue over all solved triangles.
    pub min_operator_floor: f64,
    pub max_condition: f64,
    pub max_residual: f64,
}

pub fn invert_gl(measure: &SpectralMeasure, x_max: f64, x_step: f64) -> Result<GlInversion> {
    let x_grid = UniformGrid::from_range(0.0, x_max, x_step)?;
    let h = x_grid.step();
    let table = GlKernelTable::new(measure, 2.0 * x_grid.end(), h)?;
    let mut rows = Vec::with_capacity(x_grid.count());
    let mut min_floor = f64::INFINITY;
    let mut max_condition = 0.0f64;
    let mut max_residual = 0.0f64;
    for x in x_grid.points() {
        let row = solve_gl(|s, t| table.eval(s, t), x, h)?;
        min_floor = min_floor.min(row.operator_floor);
        max_condition = max_condition.max(row.condition);
        max_residual = max_residual.max(row.residual);
        rows.push(row.values);
    }
    if min_floor < OPERATOR_FLOOR {
        return Err(IslError::SingularSystem {
            condition: 1.0 / min_floor.max(f64::MIN_POSITIVE),
        });
    }
    let kernel = TriangularKernel::new(x_grid, rows, KernelOrientation::Inward)?;
    let q = recover_q_gl(&kernel)?;
    Ok(GlInversion {
        kernel,
        q,
        min_operator_floor: min_floor,
        max_condition,
        max_residual,
    })
}
