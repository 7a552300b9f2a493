//! Dense complex linear algebra: LU with partial pivoting, forward/adjoint
//! solves, a Hager-style 1-norm condition estimate, and an inverse-power
//! smallest-eigenvalue probe for symmetric real matrices.

use num_complex::Complex64;

use crate::error::IslError;
use crate::Result;

/// Row-major dense complex matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    n: usize,
    a: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(f(i, j));
            }
        }
        DenseMatrix { n, a }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.n {
            let mut s = 0.0;
            for i in 0..self.n {
                s += self.a[i * self.n + j].norm();
            }
            best = best.max(s);
        }
        best
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::ZERO; self.n];
        for i in 0..self.n {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            let mut acc = Complex64::ZERO;
            for (aij, xj) in row.iter().zip(x.iter()) {
                acc += aij * xj;
            }
            y[i] = acc;
        }
        y
    }
}

/// LU factorization with partial pivoting, stored packed.
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    piv: Vec<usize>,
}

impl LuFactors {
    pub fn decompose(m: &DenseMatrix) -> Result<Self> {
        let n = m.n;
        let mut lu = m.a.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].norm();
            for i in k + 1..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(IslError::SingularSystem {
                    condition: f64::INFINITY,
                });
            }
            if p != k {
                piv.swap(p, k);
                for j in 0..n {
                    lu.swap(p * n + j, k * n + j);
                }
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor != Complex64::ZERO {
                    let (head, tail) = lu.split_at_mut(i * n);
                    let row_k = &head[k * n + k + 1..k * n + n];
                    let row_i = &mut tail[k + 1..n];
                    for (rij, rkj) in row_i.iter_mut().zip(row_k.iter()) {
                        *rij -= factor * rkj;
                    }
                }
            }
        }
        Ok(LuFactors { n, lu, piv })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }

    /// Solve `A^H x = b` (conjugate transpose), needed by the condition
    /// estimator.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        // A = P^T L U  =>  A^H = U^H L^H P, so solve U^H y = b, L^H z = y,
        // then undo the row permutation.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[j * n + i].conj() * y[j];
            }
            y[i] = acc / self.lu[i * n + i].conj();
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[j * n + i].conj() * y[j];
            }
            y[i] = acc;
        }
        let mut x = vec![Complex64::ZERO; n];
        for (i, &p) in self.piv.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    /// Hager-style estimate of the 1-norm condition number given `‖A‖₁`.
    pub fn condition_estimate(&self, a_one_norm: f64) -> f64 {
        let n = self.n;
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut est = 0.0f64;
        for _ in 0..5 {
            let y = self.solve(&x);
            let y_norm: f64 = y.iter().map(|v| v.norm()).sum();
            est = est.max(y_norm);
            let xi: Vec<Complex64> = y
                .iter()
                .map(|v| {
                    if v.norm() > 0.0 {
                        v / v.norm()
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                })
                .collect();
            let z = self.solve_adjoint(&xi);
            let (mut best_j, mut best_v) = (0usize, 0.0f64);
            for (j, v) in z.iter().enumerate() {
                if v.norm() > best_v {
                    best_v = v.norm();
                    best_j = j;
                }
            }
            let zx: f64 = z
                .iter()
                .zip(x.iter())
                .map(|(zi, xi)| (zi.conj() * xi).re)
                .sum();
            if best_v <= zx + 1e-15 {
                break;
            }
            x = vec![Complex64::ZERO; n];
            x[best_j] = Complex64::new(1.0, 0.0);
        }
        est * a_one_norm
    }
}

/// Smallest-magnitude eigenvalue of a symmetric real matrix (row-major, n×n)
/// by inverse power iteration; returns the signed Rayleigh quotient. A matrix
/// that fails to factor counts as eigenvalue zero.
pub fn smallest_eigenvalue_symmetric(a: &[f64], n: usize) -> f64 {
    assert_eq!(a.len(), n * n);
    let m = DenseMatrix::from_fn(n, |i, j| Complex64::new(a[i * n + j], 0.0));
    let lu = match LuFactors::decompose(&m) {
        Ok(lu) => lu,
        Err(_) => return 0.0,
    };
    let mut v = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut rayleigh = 0.0;
    for _ in 0..40 {
        let mut w = lu.solve(&v);
        let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return 0.0;
        }
        for z in &mut w {
            *z /= norm;
        }
        let av = m.mul_vec(&w);
        let new_rayleigh: f64 = w
            .iter()
            .zip(av.iter())
            .map(|(wi, avi)| (wi.conj() * avi).re)
            .sum();
        let converged = (new_rayleigh - rayleigh).abs() <= 1e-12 * new_rayleigh.abs().max(1e-30);
        rayleigh = new_rayleigh;
        v = w;
        if converged {
            break;
        }
    }
    rayleigh
}
