//! Dense square complex matrices and a cyclic Jacobi eigensolver for
//! Hermitian input.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation from constant diagonals.
    pub fn toeplitz_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim.saturating_sub(1) {
            for j in 0..self.dim - 1 {
                worst = worst.max((self[(i, j)] - self[(i + 1, j + 1)]).norm());
            }
        }
        worst
    }

    /// Quadratic form `w^H A w`.
    pub fn quadratic_form(&self, w: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::zero();
        for (i, wi) in w.iter().enumerate() {
            let row_dot: Complex<T> = self.row(i).iter().zip(w).map(|(a, wj)| a * wj).sum();
            acc = acc + wi.conj() * row_dot;
        }
        acc
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    /// Real eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Unit eigenvectors as columns, matching `values`; present only when requested.
    pub vectors: Option<CMatrix<T>>,
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi iteration on a Hermitian matrix. Each rotation first removes
/// the phase of the pivot so that a real Givens rotation annihilates it.
pub fn hermitian_eigen<T: Scalar>(matrix: &CMatrix<T>, with_vectors: bool) -> Result<HermitianEigen<T>> {
    let n = matrix.dim();
    if matrix.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("non-finite entry in eigensolver input".into()));
    }
    // Work on a copy rescaled by a power of two towards unit peak magnitude so
    // that norms of extreme-valued inputs neither overflow nor underflow.
    let peak = matrix
        .as_slice()
        .iter()
        .fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    let two = T::one() + T::one();
    let exponent = if peak > T::zero() { peak.log2().floor() } else { T::zero() };
    let (down, up) = (two.powf(-exponent), two.powf(exponent));
    let (down, up) = if down.is_finite() && up.is_finite() && down > T::zero() {
        (down, up)
    } else {
        (T::one(), T::one())
    };
    let mut a = matrix.scale(down);
    // Symmetrize so rounding asymmetry in the input cannot bias the result.
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()).scale(T::lit(0.5));
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = with_vectors.then(|| CMatrix::identity(n));

    let total = a.frobenius_norm();
    let tol = T::epsilon() * total;
    let off_norm = |a: &CMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s = s + a[(i, j)].norm_sqr();
            }
        }
        (s + s).sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= tol || total.is_zero() {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off.to_f64_lossy(),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                // Phase-align column/row q so the (p,q) entry becomes real.
                let phase = apq.unscale(mag);
                for k in 0..n {
                    if k != q {
                        a[(k, q)] = a[(k, q)] * phase.conj();
                        a[(q, k)] = a[(q, k)] * phase;
                    }
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        v[(k, q)] = v[(k, q)] * phase.conj();
                    }
                }
                a[(p, q)] = Complex::new(mag, T::zero());
                a[(q, p)] = Complex::new(mag, T::zero());

                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (mag + mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                a[(p, p)] = Complex::new(app - t * mag, T::zero());
                a[(q, q)] = Complex::new(aqq + t * mag, T::zero());
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = arp.scale(c) - arq.scale(s);
                    let new_rq = arp.scale(s) + arq.scale(c);
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp.conj();
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq.conj();
                }
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = vrp.scale(c) - vrq.scale(s);
                        v[(r, q)] = vrp.scale(s) + vrq.scale(c);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re * up).collect();
    let vectors = v.map(|v| CMatrix::from_fn(n, |r, c| v[(r, order[c])]));
    Ok(HermitianEigen { values, vectors })
}
