//! Augmented covariance matrices built from coarray correlation sequences.
//!
//! The lag-redundancy-averaged (LRA) matrix is Hermitian Toeplitz and may be
//! indefinite. The spatially smoothed (SS) matrix equals `R_lra^2 / P`, so it is
//! positive semi-definite and shares the LRA eigenvectors.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::scalar::Scalar;
use crate::spectral::CorrelationVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcmKind {
    /// Spatial smoothing.
    Ss,
    /// Lag redundancy averaging.
    Lra,
}

impl std::fmt::Display for AcmKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AcmKind::Ss => "ss",
            AcmKind::Lra => "lra",
        })
    }
}

impl std::str::FromStr for AcmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ss" => Ok(AcmKind::Ss),
            "lra" => Ok(AcmKind::Lra),
            _ => Err(Error::Config(format!("unknown ACM kind '{s}' (expected ss or lra)"))),
        }
    }
}

/// `P x P` augmented covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedCovariance<T> {
    pub matrix: CMatrix<T>,
    pub kind: AcmKind,
}

impl<T: Scalar> AugmentedCovariance<T> {
    pub fn p(&self) -> usize {
        self.matrix.dim()
    }
}

/// Averages outer products of the `P` sliding length-`P` windows of the
/// correlation vector. Window `i` (1-based) covers lags `1-i ..= P-i`.
pub fn ss_acm<T: Scalar>(r: &CorrelationVector<T>) -> AugmentedCovariance<T> {
    let p = r.p();
    let z = r.as_slice();
    let mut matrix = CMatrix::zeros(p);
    for i in 1..=p {
        let v = &z[p - i..2 * p - i];
        for a in 0..p {
            for b in 0..p {
                matrix[(a, b)] = matrix[(a, b)] + v[a] * v[b].conj();
            }
        }
    }
    AugmentedCovariance {
        matrix: matrix.scale(T::one() / T::from_count(p)),
        kind: AcmKind::Ss,
    }
}

/// Hermitian Toeplitz matrix with entry `(a, b) = r(a - b)`.
pub fn lra_acm<T: Scalar>(r: &CorrelationVector<T>) -> AugmentedCovariance<T> {
    let p = r.p();
    AugmentedCovariance {
        matrix: CMatrix::from_fn(p, |a, b| r.get(a as i64 - b as i64)),
        kind: AcmKind::Lra,
    }
}

pub fn build_acm<T: Scalar>(r: &CorrelationVector<T>, kind: AcmKind) -> AugmentedCovariance<T> {
    match kind {
        AcmKind::Ss => ss_acm(r),
        AcmKind::Lra => lra_acm(r),
    }
}

/// Eigenvalue magnitudes sorted descending, tagged with the snapshot count the
/// criteria should use.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigSpectrum<T> {
    pub magnitudes: Vec<T>,
    pub effective_snapshots: usize,
}

impl<T: Scalar> EigSpectrum<T> {
    /// Sorts the magnitudes of `values` descending.
    pub fn from_values(values: &[T], effective_snapshots: usize) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite eigenvalue".into()));
        }
        let mut magnitudes: Vec<T> = values.iter().map(|v| v.abs()).collect();
        magnitudes.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        Ok(Self {
            magnitudes,
            effective_snapshots,
        })
    }

    pub fn p(&self) -> usize {
        self.magnitudes.len()
    }
}

pub fn eig_magnitudes<T: Scalar>(acm: &AugmentedCovariance<T>, effective_snapshots: usize) -> Result<EigSpectrum<T>> {
    let eig = hermitian_eigen(&acm.matrix, false)?;
    EigSpectrum::from_values(&eig.values, effective_snapshots)
}

/// Ensemble LRA matrix `A diag(powers) A^H + noise I` for a `P`-element ULA
/// at the design frequency.
pub fn ensemble_lra<T: Scalar>(p: usize, sources: &[(T, T)], noise_power: T) -> CMatrix<T> {
    let half: Vec<Complex<T>> = (0..p)
        .map(|k| {
            let mut z: Complex<T> = sources
                .iter()
                .map(|&(u, power)| {
                    let phase = -T::PI() * T::from_count(k) * u;
                    Complex::new(phase.cos(), phase.sin()) * power
                })
                .sum();
            if k == 0 {
                z = z + noise_power;
            }
            z
        })
        .collect();
    let r = CorrelationVector::from_nonnegative_lags(&half).expect("p >= 1");
    lra_acm(&r).matrix
}
