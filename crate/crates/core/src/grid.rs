//! Uniform grids and complex-valued sampled functions.
//!
//! Every discretized object in the crate lives on a [`UniformGrid`]; sharing
//! one grid representation keeps node arithmetic exact (sums and differences
//! of node indices land on nodes again), which the integral-equation solvers
//! rely on.

use num_complex::Complex64;

use crate::error::IslError;
use crate::Result;

/// Uniformly spaced grid `x_i = start + i * step`, `i = 0..count`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() {
            return Err(IslError::InvalidInput(
                "grid start and step must be finite".into(),
            ));
        }
        if step <= 0.0 {
            return Err(IslError::InvalidInput(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if count < 2 {
            return Err(IslError::InvalidInput(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        Ok(UniformGrid { start, step, count })
    }

    /// Grid covering `[start, end]` with the largest step not exceeding
    /// `step_hint` that lands exactly on `end`.
    pub fn from_range(start: f64, end: f64, step_hint: f64) -> Result<Self> {
        if !(end > start) {
            return Err(IslError::InvalidInput(format!(
                "grid range must satisfy end > start, got [{start}, {end}]"
            )));
        }
        if !(step_hint > 0.0) {
            return Err(IslError::InvalidInput(format!(
                "grid step hint must be positive, got {step_hint}"
            )));
        }
        let intervals = ((end - start) / step_hint - 1e-9).ceil().max(1.0) as usize;
        UniformGrid::new(start, (end - start) / intervals as f64, intervals + 1)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }

    /// Index of the node nearest to `x`.
    pub fn nearest_index(&self, x: f64) -> usize {
        let raw = ((x - self.start) / self.step).round();
        raw.clamp(0.0, (self.count - 1) as f64) as usize
    }

    /// Index of the node exactly at `x`, within a relative tolerance of the
    /// step, or `None` if `x` is off-node or outside the grid.
    pub fn index_at(&self, x: f64) -> Option<usize> {
        let i = self.nearest_index(x);
        if (self.point(i) - x).abs() <= 1e-9 * self.step {
            Some(i)
        } else {
            None
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start - 1e-12 && x <= self.end() + 1e-12
    }

    /// Grid with the step halved and the same span.
    pub fn refined(&self) -> UniformGrid {
        UniformGrid {
            start: self.start,
            step: self.step / 2.0,
            count: 2 * self.count - 1,
        }
    }
}

/// Complex samples on a uniform grid.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(IslError::InvalidInput(format!(
                "sample count {} does not match grid size {}",
                values.len(),
                grid.count()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(IslError::InvalidInput(format!(
                "non-finite sample {v} in function data"
            )));
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn from_real(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        let complex = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        SampledFunction::new(grid, complex)
    }

    /// Sample `f` at every grid node.
    pub fn tabulate(grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().map(&f).collect();
        SampledFunction::new(grid, values)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary residue, for checking nominally real data.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Discard imaginary parts after verifying they are below `tol` (absolute,
    /// relative to the sup norm).
    pub fn into_real(self, tol: f64) -> Result<Vec<f64>> {
        let scale = self.max_abs().max(1.0);
        let residue = self.max_imag();
        if residue > tol * scale {
            return Err(IslError::CrossCheckFailure(format!(
                "imaginary residue {residue:.3e} exceeds {tol:.1e} on nominally real data"
            )));
        }
        Ok(self.values.into_iter().map(|v| v.re).collect())
    }

    /// Piecewise-linear interpolation, clamped to the grid span.
    pub fn eval_linear(&self, x: f64) -> Complex64 {
        let t = (x - self.grid.start()) / self.grid.step();
        if t <= 0.0 {
            return self.values[0];
        }
        let last = (self.grid.count() - 1) as f64;
        if t >= last {
            return self.values[self.grid.count() - 1];
        }
        let i = t.floor() as usize;
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}
