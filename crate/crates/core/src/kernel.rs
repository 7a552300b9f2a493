//! Triangular transformation kernels shared by the inversion methods: rows
//! live on `y ∈ [x, y_max]` (outward) or `y ∈ [0, x]` (inward), and the
//! potential is recovered from the diagonal trace.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::grid::UniformGrid;
use crate::numerics::quad::derivative_4th;
use crate::potential::RadialPotential;
use crate::{IslError, Result};

/// Recovered samples below this size are treated as the zero tail when the
/// support radius of a reconstructed potential is declared.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelOrientation {
    /// Row `i` samples `y = x_i, x_i + h, …` (transformation kernel with
    /// support above the diagonal).
    Outward,
    /// Row `i` samples `y = 0, h, …, x_i` (support below the diagonal).
    Inward,
}

/// Kernel values on a triangle attached to the diagonal `y = x`.
#[derive(Debug, Clone)]
pub struct TriangularKernel {
    x_grid: UniformGrid,
    rows: Vec<Vec<f64>>,
    orientation: KernelOrientation,
}

impl TriangularKernel {
    pub fn new(
        x_grid: UniformGrid,
        rows: Vec<Vec<f64>>,
        orientation: KernelOrientation,
    ) -> Result<Self> {
        if rows.len() != x_grid.count() {
            return Err(IslError::InvalidInput(format!(
                "kernel has {} rows for {} grid nodes",
                rows.len(),
                x_grid.count()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            let ok = match orientation {
                KernelOrientation::Outward => !row.is_empty(),
                KernelOrientation::Inward => row.len() == i + 1,
            };
            if !ok {
                return Err(IslError::InvalidInput(format!(
                    "kernel row {i} has {} values, inconsistent with its triangle",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(IslError::InvalidInput(format!(
                    "kernel row {i} contains a non-finite value"
                )));
            }
        }
        Ok(TriangularKernel {
            x_grid,
            rows,
            orientation,
        })
    }

    pub fn x_grid(&self) -> &UniformGrid {
        &self.x_grid
    }

    pub fn orientation(&self) -> KernelOrientation {
        self.orientation
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// `y` coordinate of `row(i)[j]`.
    pub fn y_point(&self, i: usize, j: usize) -> f64 {
        match self.orientation {
            KernelOrientation::Outward => self.x_grid.point(i) + self.x_grid.step() * j as f64,
            KernelOrientation::Inward => self.x_grid.step() * j as f64,
        }
    }

    /// Diagonal trace `A(x_i, x_i)`.
    pub fn diagonal(&self) -> Vec<f64> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| match self.orientation {
                KernelOrientation::Outward => row[0],
                KernelOrientation::Inward => row[i],
            })
            .collect()
    }

    /// Largest jump between adjacent diagonal samples, a continuity
    /// diagnostic for the trace that gets differentiated.
    pub fn max_diagonal_jump(&self) -> f64 {
        let d = self.diagonal();
        d.windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max)
    }

    /// Potential from the diagonal trace: `q = factor · d/dx A(x,x)` with a
    /// 4th-order stencil; samples below [`SUPPORT_THRESHOLD`] past the last
    /// significant node are zeroed so the declared support is finite.
    pub fn recover_potential(&self, factor: f64, label: impl Into<String>) -> Result<RadialPotential> {
        let diag = self.diagonal();
        if diag.len() < 5 {
            return Err(IslError::InvalidInput(
                "diagonal differentiation needs at least 5 nodes".into(),
            ));
        }
        let mut q: Vec<f64> = derivative_4th(&diag, self.x_grid.step())
            .into_iter()
            .map(|d| factor * d)
            .collect();
        if let Some(last) = q.iter().rposition(|v| v.abs() >= SUPPORT_THRESHOLD) {
            for v in q.iter_mut().skip(last + 1) {
                *v = 0.0;
            }
        } else {
            q.iter_mut().for_each(|v| *v = 0.0);
        }
        RadialPotential::new(self.x_grid.clone(), q, label)
    }

    /// Dump the triangle as CSV rows `x,y,A`.
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path)?;
        let mut out = BufWriter::new(file);
        out.write_all(b"x,y,A\n")?;
        for (i, row) in self.rows.iter().enumerate() {
            let x = self.x_grid.point(i);
            for (j, v) in row.iter().enumerate() {
                let line = format!("{x:.16e},{:.16e},{v:.16e}\n", self.y_point(i, j));
                out.write_all(line.as_bytes())?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> UniformGrid {
        UniformGrid::new(0.0, 0.1, n).unwrap()
    }

    #[test]
    fn inward_triangle_shape_is_enforced() {
        let rows = vec![vec![1.0], vec![1.0, 2.0], vec![1.0, 2.0, 3.0]];
        let k = TriangularKernel::new(grid(3), rows, KernelOrientation::Inward).unwrap();
        assert_eq!(k.diagonal(), vec![1.0, 2.0, 3.0]);
        assert!((k.y_point(2, 1) - 0.1).abs() < 1e-15);

        let bad = vec![vec![1.0], vec![1.0, 2.0, 3.0], vec![1.0]];
        assert!(TriangularKernel::new(grid(3), bad, KernelOrientation::Inward).is_err());
    }

    #[test]
    fn outward_diagonal_and_recovery_round_trip() {
        // Diagonal trace t(x) = x² gives q = factor · 2x exactly (the stencil
        // is exact on quadratics).
        let g = grid(9);
        let rows: Vec<Vec<f64>> = (0..9)
            .map(|i| {
                let x = g.point(i);
                vec![x * x, 0.0, 0.0]
            })
            .collect();
        let k = TriangularKernel::new(g.clone(), rows, KernelOrientation::Outward).unwrap();
        let q = k.recover_potential(-2.0, "probe").unwrap();
        for (i, x) in g.points().enumerate() {
            assert!((q.samples()[i] - (-4.0 * x)).abs() < 1e-12);
        }
        assert!(k.max_diagonal_jump() <= 0.1 * (2.0 * 0.8 + 0.2));
    }

    #[test]
    fn tiny_tail_is_zeroed_for_finite_support() {
        // Constant slope then a flat stretch long enough that even the
        // one-sided end stencils see only constants: the derivative vanishes
        // exactly over the tail and the recovered support ends at the kink.
        let g = grid(10);
        let mut diag = vec![0.0; 10];
        for (i, d) in diag.iter_mut().enumerate() {
            *d = if i < 3 { 0.1 * i as f64 } else { 0.3 };
        }
        let rows: Vec<Vec<f64>> = diag.iter().map(|&d| vec![d]).collect();
        let k = TriangularKernel::new(g, rows, KernelOrientation::Outward).unwrap();
        let q = k.recover_potential(2.0, "flat tail").unwrap();
        for i in 5..10 {
            assert_eq!(q.samples()[i], 0.0, "node {i}");
        }
        assert!(q.support_radius() < 0.41);
    }
}
