//! Zero finding for analytic functions in rectangular boxes: argument-
//! principle counting on the boundary, adaptive bisection until each box
//! holds one zero, then damped Newton with numerical derivatives.

use num_complex::Complex64;

use crate::error::IslError;
use crate::numerics::winding::winding_number;
use crate::Result;

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy)]
pub struct ComplexBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl ComplexBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(IslError::InvalidInput(format!(
                "degenerate box [{re_min},{re_max}]x[{im_min},{im_max}]"
            )));
        }
        Ok(ComplexBox {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        let (dw, dh) = (self.width() * slack, self.height() * slack);
        z.re >= self.re_min - dw
            && z.re <= self.re_max + dw
            && z.im >= self.im_min - dh
            && z.im <= self.im_max + dh
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    fn corner(&self, i: usize) -> Complex64 {
        match i % 4 {
            0 => Complex64::new(self.re_min, self.im_min),
            1 => Complex64::new(self.re_max, self.im_min),
            2 => Complex64::new(self.re_max, self.im_max),
            _ => Complex64::new(self.re_min, self.im_max),
        }
    }

    /// Point on the boundary at parameter `t ∈ [0,4)`, one unit per side,
    /// counterclockwise from the lower-left corner.
    fn boundary_point(&self, t: f64) -> Complex64 {
        let side = (t.floor() as usize) % 4;
        let frac = t - t.floor();
        let a = self.corner(side);
        let b = self.corner(side + 1);
        a + (b - a) * frac
    }

    /// Split across the longer dimension at fraction `frac`.
    fn split(&self, frac: f64) -> (ComplexBox, ComplexBox) {
        if self.width() >= self.height() {
            let cut = self.re_min + frac * self.width();
            (
                ComplexBox { re_max: cut, ..*self },
                ComplexBox { re_min: cut, ..*self },
            )
        } else {
            let cut = self.im_min + frac * self.height();
            (
                ComplexBox { im_max: cut, ..*self },
                ComplexBox { im_min: cut, ..*self },
            )
        }
    }
}

/// All zeros of `f` inside `bx`, refined until `|f| ≤ tol`. `f` must be
/// analytic on the closed box with no zeros on the boundary.
pub fn find_zeros_in_box(
    f: impl Fn(Complex64) -> Complex64,
    bx: ComplexBox,
    tol: f64,
) -> Result<Vec<Complex64>> {
    let expected = count_zeros(&f, &bx)?;
    let mut zeros = Vec::new();
    collect_zeros(&f, bx, tol, expected, 0, &mut zeros)?;
    zeros.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    if zeros.len() != expected {
        return Err(IslError::CountMismatch(format!(
            "argument principle counts {expected} zeros, refinement located {}",
            zeros.len()
        )));
    }
    Ok(zeros)
}

/// Number of zeros of `f` in `bx` by the argument principle, with adaptive
/// boundary refinement.
pub fn count_zeros(f: &impl Fn(Complex64) -> Complex64, bx: &ComplexBox) -> Result<usize> {
    // Parametric boundary samples, refined wherever the phase turns fast.
    let mut ts: Vec<f64> = (0..128).map(|i| i as f64 / 32.0).collect();
    let mut vals: Vec<Complex64> = ts.iter().map(|&t| f(bx.boundary_point(t))).collect();
    let scale = vals.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Err(IslError::BoundaryZero(format!("{:.6}", bx.center())));
    }
    for _ in 0..16 {
        let mut inserts: Vec<(usize, f64)> = Vec::new();
        for i in 0..ts.len() {
            let a = vals[i];
            let b = vals[(i + 1) % ts.len()];
            if a.norm() <= 1e-13 * scale {
                return Err(IslError::BoundaryZero(format!(
                    "{:.6}",
                    bx.boundary_point(ts[i])
                )));
            }
            if (b / a).arg().abs() >= 0.9 * std::f64::consts::PI {
                let t_next = if i + 1 == ts.len() { 4.0 } else { ts[i + 1] };
                inserts.push((i + 1, 0.5 * (ts[i] + t_next)));
            }
        }
        if inserts.is_empty() {
            break;
        }
        if ts.len() + inserts.len() > 20000 {
            return Err(IslError::UnderResolvedContour(
                "boundary refinement budget exhausted".into(),
            ));
        }
        for (offset, (idx, t)) in inserts.into_iter().enumerate() {
            let at = idx + offset;
            ts.insert(at, t);
            vals.insert(at, f(bx.boundary_point(t)));
        }
    }
    let w = winding_number(&vals)?;
    if w < 0 {
        return Err(IslError::CountMismatch(format!(
            "negative boundary winding {w}; function not analytic inside the box?"
        )));
    }
    Ok(w as usize)
}

fn collect_zeros(
    f: &impl Fn(Complex64) -> Complex64,
    bx: ComplexBox,
    tol: f64,
    count: usize,
    depth: usize,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    if depth > 60 {
        return Err(IslError::IterationBudgetExceeded(
            "zero search subdivision depth exceeded".into(),
        ));
    }
    if count == 1 {
        if let Some(z) = newton_polish(f, &bx, tol) {
            out.push(z);
            return Ok(());
        }
        // Newton failed (e.g. started near a phase ridge): bisect further.
    }
    let (left, right) = split_avoiding_zeros(f, &bx)?;
    let (cl, cr) = (count_zeros(f, &left)?, count_zeros(f, &right)?);
    if cl + cr != count {
        return Err(IslError::CountMismatch(format!(
            "zeros lost while splitting: parent {count}, children {cl} + {cr}"
        )));
    }
    collect_zeros(f, left, tol, cl, depth + 1, out)?;
    collect_zeros(f, right, tol, cr, depth + 1, out)
}

/// Split the box, nudging the cut away from any zero sitting on it.
fn split_avoiding_zeros(
    f: &impl Fn(Complex64) -> Complex64,
    bx: &ComplexBox,
) -> Result<(ComplexBox, ComplexBox)> {
    'fractions: for frac in [0.5, 0.5625, 0.4375, 0.53125] {
        let (l, r) = bx.split(frac);
        // Probe the shared edge; a near-zero value means a zero sits on the
        // candidate cut, so try the next offset.
        let probe_line = |a: Complex64, b: Complex64| -> f64 {
            (0..17)
                .map(|i| f(a + (b - a) * (i as f64 / 16.0)).norm())
                .fold(f64::INFINITY, f64::min)
        };
        let (edge_a, edge_b) = if bx.width() >= bx.height() {
            (
                Complex64::new(l.re_max, bx.im_min),
                Complex64::new(l.re_max, bx.im_max),
            )
        } else {
            (
                Complex64::new(bx.re_min, l.im_max),
                Complex64::new(bx.re_max, l.im_max),
            )
        };
        let boundary_scale = (0..16)
            .map(|i| f(bx.boundary_point(i as f64 / 4.0)).norm())
            .fold(0.0f64, f64::max);
        if probe_line(edge_a, edge_b) <= 1e-10 * boundary_scale {
            continue 'fractions;
        }
        return Ok((l, r));
    }
    Err(IslError::BoundaryZero(format!("{:.6}", bx.center())))
}

/// Damped Newton iteration from the box center; derivative by central
/// differences with step `1e-6·(1+|z|)`.
fn newton_polish(
    f: &impl Fn(Complex64) -> Complex64,
    bx: &ComplexBox,
    tol: f64,
) -> Option<Complex64> {
    let mut z = bx.center();
    let mut fz = f(z);
    for _ in 0..100 {
        if fz.norm() <= tol {
            return bx.contains(z, 1e-9).then_some(z);
        }
        let h = 1e-6 * (1.0 + z.norm());
        let df = (f(z + h) - f(z - h)) / (2.0 * h);
        if df.norm() == 0.0 {
            return None;
        }
        let mut step = fz / df;
        // Keep steps from tunneling out of the search region.
        let cap = bx.diameter();
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        let mut damped = 1.0;
        loop {
            let z_new = z - step * damped;
            let f_new = f(z_new);
            if f_new.norm() < fz.norm() {
                z = z_new;
                fz = f_new;
                break;
            }
            damped *= 0.5;
            if damped < 1e-6 {
                return None;
            }
        }
        if !bx.contains(z, 0.5) {
            return None;
        }
    }
    None
}
