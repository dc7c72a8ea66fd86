//! Small dense complex linear algebra: square matrices, inner products, and
//! Hermitian eigenvalues.
//!
//! Dimensions here are tiny (system dimension `d <= 64`), so everything is
//! written directly against row-major `Vec<Complex64>` storage with no
//! attempt at blocking or parallelism.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// With std the inherent f64 methods win and this import goes unused.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Inner product `<a|b> = Σ conj(a_k) b_k`.
///
/// Panics if the slices have different lengths; callers validate shapes
/// first.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len(), "inner product of mismatched vectors");
    a.iter()
        .zip(b.iter())
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

/// Squared L2 norm of a complex vector.
pub fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest entry magnitude of a complex vector.
pub fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Wrap an angle into the principal branch `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    use core::f64::consts::PI;
    let mut a = x % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Square complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Zero matrix of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    /// Identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from nested rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        for row in &rows {
            if row.len() != dim {
                return Err(Error::ShapeMismatch { expected: dim, got: row.len() });
            }
        }
        Ok(Self { dim, data: rows.into_iter().flatten().collect() })
    }

    /// Build entry-by-entry from a closure over `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Rank-1 outer product `|v><v|` (not necessarily normalized input).
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Matrix product `self * rhs`.
    ///
    /// Panics on dimension mismatch; matrices in this crate always share
    /// the system dimension.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product of mismatched dimensions");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "matvec of mismatched dimensions");
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for i in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..d {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Entry-wise scaling.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Largest entry magnitude (the max-entry norm used by the validation
    /// residuals).
    pub fn max_entry_norm(&self) -> f64 {
        max_abs(&self.data)
    }

    /// Maximum column sum of entry magnitudes (operator 1-norm), used to
    /// pick the scaling exponent of the matrix exponential.
    pub fn one_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.dim {
            let mut col = 0.0;
            for i in 0..self.dim {
                col += self[(i, j)].norm();
            }
            best = best.max(col);
        }
        best
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations,
    /// ascending. The caller is responsible for Hermiticity; the routine
    /// only reads the strict upper triangle plus the diagonal.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_finite() {
            return Err(Error::InvalidMatrix("non-finite entries".into()));
        }
        let d = self.dim;
        if d == 0 {
            return Ok(Vec::new());
        }
        let mut a = self.clone();
        // Symmetrize so rounding-level non-Hermiticity cannot bias the sweep.
        for i in 0..d {
            a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
            for j in (i + 1)..d {
                let m = 0.5 * (a[(i, j)] + a[(j, i)].conj());
                a[(i, j)] = m;
                a[(j, i)] = m.conj();
            }
        }
        let scale = a.max_entry_norm().max(1e-300);
        let tol = 1e-14 * scale;
        const MAX_SWEEPS: usize = 64;
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0f64;
            for i in 0..d {
                for j in (i + 1)..d {
                    off = off.max(a[(i, j)].norm());
                }
            }
            if off <= tol {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    let apq = a[(p, q)];
                    let abs_apq = apq.norm();
                    if abs_apq <= tol * 1e-2 {
                        continue;
                    }
                    let phase = apq / abs_apq;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let tau = (aqq - app) / (2.0 * abs_apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Unitary U differs from identity on rows/cols (p, q):
                    //   U[p][p] = c*phase, U[p][q] = s*phase,
                    //   U[q][p] = -s,      U[q][q] = c.
                    // Right-multiply by U, then left-multiply by U^dagger.
                    for i in 0..d {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * (c * phase) - aiq * s;
                        a[(i, q)] = aip * (s * phase) + aiq * c;
                    }
                    for i in 0..d {
                        let api = a[(p, i)];
                        let aqi = a[(q, i)];
                        a[(p, i)] = api * (c * phase.conj()) - aqi * s;
                        a[(q, i)] = api * (s * phase.conj()) + aqi * c;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..d).map(|i| a[(i, i)].re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
        Ok(eig)
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        let d = self.dim;
        &mut self.data[i * d + j]
    }
}
