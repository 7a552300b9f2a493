//! Compactly supported real radial potentials sampled on uniform grids,
//! their CSV serialization, and moment growth analysis.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::IslError;
use crate::grid::UniformGrid;
use crate::numerics::quad;
use crate::Result;

/// Real potential `q(x)` on `[0, x_max]`, zero beyond its support radius.
///
/// Potentials built by [`RadialPotential::piecewise_constant`] additionally
/// carry their exact step description; `value` and the ODE-based operations
/// use it so that jumps stay sharp instead of being smeared over one grid
/// cell by the sampled representation.
#[derive(Debug, Clone)]
pub struct RadialPotential {
    grid: UniformGrid,
    samples: Vec<f64>,
    support_radius: f64,
    label: String,
    first_moment: f64,
    steps: Option<Vec<(f64, f64)>>,
}

impl RadialPotential {
    /// Wrap samples on `grid` (which must start at 0). The support radius is
    /// the smallest node beyond which every sample is exactly zero; data with
    /// a nonzero final sample gets the full grid span as support.
    pub fn new(grid: UniformGrid, samples: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if grid.start().abs() > 1e-12 {
            return Err(IslError::InvalidInput(format!(
                "potential grid must start at x = 0, got {}",
                grid.start()
            )));
        }
        if samples.len() != grid.count() {
            return Err(IslError::InvalidInput(format!(
                "potential sample count {} does not match grid size {}",
                samples.len(),
                grid.count()
            )));
        }
        if samples.iter().any(|q| !q.is_finite()) {
            return Err(IslError::InvalidInput(
                "potential samples must be finite".into(),
            ));
        }
        let support_radius = match samples.iter().rposition(|&q| q != 0.0) {
            None => 0.0,
            Some(i) => grid.point(i),
        };
        let first_moment =
            quad::abs_power_moment_piecewise_linear(grid.start(), grid.step(), &samples, 1);
        Ok(RadialPotential {
            grid,
            samples,
            support_radius,
            label: label.into(),
            first_moment,
            steps: None,
        })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64, label: impl Into<String>) -> Result<Self> {
        let samples = grid.points().map(f).collect();
        RadialPotential::new(grid, samples, label)
    }

    /// Piecewise-constant potential: `heights[i]` on `(breaks[i-1], breaks[i]]`
    /// (first piece starts at 0), zero beyond the last break. Breaks snap to
    /// grid nodes; a node lying on a break takes the left piece's height.
    pub fn piecewise_constant(
        breaks: &[f64],
        heights: &[f64],
        x_max: f64,
        step: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if breaks.len() != heights.len() || breaks.is_empty() {
            return Err(IslError::InvalidInput(
                "piecewise potential needs one break per height".into(),
            ));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) || breaks[0] <= 0.0 {
            return Err(IslError::InvalidInput(
                "piecewise potential breaks must be positive and increasing".into(),
            ));
        }
        if breaks[breaks.len() - 1] > x_max {
            return Err(IslError::InvalidInput(format!(
                "last break {} exceeds x_max {}",
                breaks[breaks.len() - 1],
                x_max
            )));
        }
        let grid = UniformGrid::from_range(0.0, x_max, step)?;
        let snapped: Vec<f64> = breaks.iter().map(|&b| grid.point(grid.nearest_index(b))).collect();
        if snapped.windows(2).any(|w| w[1] <= w[0]) || snapped[0] <= 0.0 {
            return Err(IslError::InvalidInput(
                "piecewise potential breaks collide after snapping to the grid".into(),
            ));
        }
        let samples = grid
            .points()
            .map(|x| {
                for (b, h) in snapped.iter().zip(heights.iter()) {
                    if x <= b + 1e-12 {
                        return *h;
                    }
                }
                0.0
            })
            .collect();
        let mut q = RadialPotential::new(grid, samples, label)?;
        let steps: Vec<(f64, f64)> = snapped.into_iter().zip(heights.iter().copied()).collect();
        q.first_moment = steps
            .iter()
            .scan(0.0, |left, &(b, h)| {
                let m = h.abs() * (b * b - *left * *left) / 2.0;
                *left = b;
                Some(m)
            })
            .sum();
        q.steps = Some(steps);
        Ok(q)
    }

    /// Exact step description `(right_edge, height)` when the potential was
    /// built as piecewise constant; edges are grid nodes.
    pub fn exact_steps(&self) -> Option<&[(f64, f64)]> {
        self.steps.as_deref()
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `∫ x |q(x)| dx` over the grid.
    pub fn first_moment(&self) -> f64 {
        self.first_moment
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|&q| q == 0.0)
    }

    /// Pointwise value: the exact step function for piecewise-constant
    /// potentials, otherwise the piecewise-linear interpolant of the samples;
    /// exactly zero beyond the grid.
    pub fn value(&self, x: f64) -> f64 {
        if let Some(steps) = &self.steps {
            if x < 0.0 {
                return 0.0;
            }
            for &(b, h) in steps {
                if x <= b {
                    return h;
                }
            }
            return 0.0;
        }
        if x < 0.0 || x > self.grid.end() {
            return 0.0;
        }
        let t = (x - self.grid.start()) / self.grid.step();
        let i = (t.floor() as usize).min(self.grid.count() - 2);
        let frac = t - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, q| m.max(q.abs()))
    }

    /// Absolute moments `Q_n = ∫ x^n |q| dx` for `n = 0..=n_max` and the
    /// fitted growth exponent of `log Q_n ~ b · n log n`.
    pub fn moments(&self, n_max: u32) -> Result<MomentReport> {
        if n_max > 200 {
            return Err(IslError::InvalidInput(format!(
                "moment order {n_max} exceeds 200; higher orders overflow at desk scale"
            )));
        }
        let x_end: f64 = self.grid.end().max(1.0);
        if (n_max as f64 + 2.0) * x_end.ln() > 700.0 {
            return Err(IslError::InvalidInput(format!(
                "x_max^{n_max} overflows for grid end {x_end}"
            )));
        }
        let moments: Vec<f64> = (0..=n_max)
            .map(|n| {
                quad::abs_power_moment_piecewise_linear(
                    self.grid.start(),
                    self.grid.step(),
                    &self.samples,
                    n,
                )
            })
            .collect();
        let growth_exponent_b = fit_growth_exponent(&moments);
        let infinitely_many_resonances = !self.is_zero() && growth_exponent_b < 1.0;
        Ok(MomentReport {
            moments,
            growth_exponent_b,
            infinitely_many_resonances,
        })
    }

    /// Write as `x,q` CSV with LF line endings.
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("x,q\n");
        for (x, q) in self.grid.points().zip(self.samples.iter()) {
            out.push_str(&format!("{:.16e},{:.16e}\n", x, q));
        }
        let mut file = fs::File::create(path)?;
        file.write_all(out.as_bytes())?;
        Ok(())
    }
}

/// Moments of `|q|` with the fitted growth exponent of the top half of the
/// `n`-range; `b < 1` for a nonzero potential signals that the potential
/// generates infinitely many resonances.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub moments: Vec<f64>,
    pub growth_exponent_b: f64,
    pub infinitely_many_resonances: bool,
}

/// Least-squares fit of `log Q_n = d + c·n + b·n·log n` over the top half of
/// the order range; the linear nuisance term keeps the Stirling `O(n)` part
/// of the moment growth out of the `n log n` slope.
fn fit_growth_exponent(moments: &[f64]) -> f64 {
    let n_max = moments.len().saturating_sub(1);
    let rows: Vec<(f64, f64)> = (n_max / 2..=n_max)
        .filter(|&n| n >= 2 && moments[n] > 0.0 && moments[n].is_finite())
        .map(|n| (n as f64, moments[n].ln()))
        .collect();
    if rows.len() < 4 {
        return 0.0;
    }
    // Normal equations for the 3-parameter model.
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(n, y) in &rows {
        let phi = [1.0, n, n * n.ln()];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += phi[i] * phi[j];
            }
            atb[i] += phi[i] * y;
        }
    }
    solve3(ata, atb).map_or(0.0, |c| c[2])
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for k in 0..3 {
        let p = (k..3).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-300 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..3 {
            let f = a[i][k] / a[k][k];
            for j in k..3 {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut acc = b[i];
        for j in i + 1..3 {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Some(x)
}

/// Read a potential from `x,q` CSV; the grid must be uniform from 0.
pub fn load_potential(path: &Path) -> Result<RadialPotential> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "x,q" => {}
        other => {
            return Err(IslError::Format(format!(
                "potential CSV must start with header 'x,q', got {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut xs = Vec::new();
    let mut qs = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (x, q) = match (parts.next(), parts.next(), parts.next()) {
            (Some(x), Some(q), None) => (x, q),
            _ => {
                return Err(IslError::Format(format!(
                    "line {}: expected 'x,q', got {line:?}",
                    lineno + 2
                )))
            }
        };
        let parse = |s: &str, what: &str| {
            s.trim().parse::<f64>().map_err(|_| {
                IslError::Format(format!("line {}: bad {what} value {s:?}", lineno + 2))
            })
        };
        xs.push(parse(x, "x")?);
        qs.push(parse(q, "q")?);
    }
    if xs.len() < 2 {
        return Err(IslError::Format("potential CSV needs at least 2 rows".into()));
    }
    let step = xs[1] - xs[0];
    let grid = UniformGrid::new(xs[0], step, xs.len())?;
    for (i, &x) in xs.iter().enumerate() {
        if (x - grid.point(i)).abs() > 1e-9 * step.max(1.0) {
            return Err(IslError::Format(format!(
                "potential CSV grid is not uniform at row {} (x = {x})",
                i + 2
            )));
        }
    }
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "potential".into());
    RadialPotential::new(grid, qs, label)
}
