//! Eigenvalue-based source enumeration criteria: MDL, MDLgap and SORTE, plus
//! the large-snapshot limit functions used to check MDLgap's consistency.

use serde::{Deserialize, Serialize};

use crate::acm::EigSpectrum;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionKind {
    Mdl,
    MdlGap,
    Sorte,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 3] = [CriterionKind::Mdl, CriterionKind::MdlGap, CriterionKind::Sorte];

    pub fn name(self) -> &'static str {
        match self {
            CriterionKind::Mdl => "mdl",
            CriterionKind::MdlGap => "mdlgap",
            CriterionKind::Sorte => "sorte",
        }
    }

    /// Candidate source counts `(first, last)` for a `P x P` matrix.
    pub fn q_range(self, p: usize) -> (usize, usize) {
        match self {
            CriterionKind::Mdl => (0, p - 1),
            CriterionKind::MdlGap => (1, p - 1),
            CriterionKind::Sorte => (1, p - 3),
        }
    }
}

impl std::fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CriterionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mdl" => Ok(CriterionKind::Mdl),
            "mdlgap" | "mdl-gap" | "mdl_gap" => Ok(CriterionKind::MdlGap),
            "sorte" => Ok(CriterionKind::Sorte),
            _ => Err(Error::Config(format!("unknown criterion '{s}'"))),
        }
    }
}

/// Criterion values over consecutive candidate counts starting at `q_min`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionCurve<T> {
    pub kind: CriterionKind,
    pub q_min: usize,
    pub values: Vec<T>,
    pub argmin: usize,
}

impl<T: Scalar> CriterionCurve<T> {
    fn new(kind: CriterionKind, q_min: usize, values: Vec<T>) -> Self {
        let argmin = q_min + argmin_first(&values);
        Self {
            kind,
            q_min,
            values,
            argmin,
        }
    }

    pub fn q_max(&self) -> usize {
        self.q_min + self.values.len() - 1
    }

    /// Value at candidate count `q`.
    pub fn at(&self, q: usize) -> T {
        self.values[q - self.q_min]
    }

    /// `(q, value)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.q_min + i, v))
    }
}

/// Index of the smallest value; ties go to the first. Infinite values never
/// beat finite ones and an all-infinite curve yields index 0.
fn argmin_first<T: Scalar>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Pointwise arithmetic mean of curves sharing kind and range.
pub fn average_curves<T: Scalar>(curves: &[CriterionCurve<T>]) -> Result<CriterionCurve<T>> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InvalidArgument("no curves to average".into()))?;
    if curves
        .iter()
        .any(|c| c.kind != first.kind || c.q_min != first.q_min || c.values.len() != first.values.len())
    {
        return Err(Error::InvalidArgument("curves differ in kind or range".into()));
    }
    let scale = T::one() / T::from_count(curves.len());
    let values = (0..first.values.len())
        .map(|i| curves.iter().map(|c| c.values[i]).sum::<T>() * scale)
        .collect();
    Ok(CriterionCurve::new(first.kind, first.q_min, values))
}

/// Relative floor applied to eigenvalue magnitudes before taking logs.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Magnitudes clamped to `EIGEN_FLOOR * |lambda_1|`.
fn floored<T: Scalar>(spec: &EigSpectrum<T>, min_p: usize) -> Result<Vec<T>> {
    let p = spec.p();
    if p < min_p {
        return Err(Error::InvalidArgument(format!("need at least {min_p} eigenvalues, got {p}")));
    }
    if spec.effective_snapshots == 0 {
        return Err(Error::InvalidArgument("effective snapshot count must be >= 1".into()));
    }
    let top = spec.magnitudes[0];
    if !(top > T::zero()) || !top.is_finite() {
        return Err(Error::Numerical("spectrum is all zero or non-finite".into()));
    }
    let floor = top * T::lit(EIGEN_FLOOR);
    Ok(spec.magnitudes.iter().map(|&m| m.max(floor)).collect())
}

/// Log arithmetic means `log a_q` and suffix log-sums `sum_{j>q} log lambda_j`
/// for `q = 0..P` (1-based eigenvalue indexing).
fn tail_statistics<T: Scalar>(lam: &[T]) -> (Vec<T>, Vec<T>) {
    let p = lam.len();
    let mut log_mean = vec![T::zero(); p];
    let mut log_sum = vec![T::zero(); p];
    let mut sum = T::zero();
    let mut logs = T::zero();
    for q in (0..p).rev() {
        sum = sum + lam[q];
        logs = logs + lam[q].ln();
        log_mean[q] = (sum / T::from_count(p - q)).ln();
        log_sum[q] = logs;
    }
    (log_mean, log_sum)
}

/// `MDL(q) = -(P-q) L log(g_q / a_q) + q (2P - q) log(L) / 2` for `q = 0..P-1`,
/// with `g_q`, `a_q` the geometric and arithmetic means of the `P - q`
/// smallest magnitudes.
pub fn mdl<T: Scalar>(spec: &EigSpectrum<T>) -> Result<CriterionCurve<T>> {
    let lam = floored(spec, 2)?;
    let p = lam.len();
    let l = T::from_count(spec.effective_snapshots);
    let log_l = l.ln();
    let (log_mean, log_sum) = tail_statistics(&lam);
    let half = T::lit(0.5);
    let values = (0..p)
        .map(|q| {
            let tail = T::from_count(p - q);
            let likelihood = -l * (log_sum[q] - tail * log_mean[q]);
            let penalty = half * T::from_count(q * (2 * p - q)) * log_l;
            likelihood + penalty
        })
        .collect();
    Ok(CriterionCurve::new(CriterionKind::Mdl, 0, values))
}

/// Snapshot-normalized backward difference of MDL, evaluated in closed form:
/// `-log(a_{q-1}^{P-q+1} / (|lambda_q| a_q^{P-q})) + (P - q + 1/2) log(L) / L`
/// for `q = 1..P-1`.
pub fn mdlgap<T: Scalar>(spec: &EigSpectrum<T>) -> Result<CriterionCurve<T>> {
    let lam = floored(spec, 2)?;
    let p = lam.len();
    let l = T::from_count(spec.effective_snapshots);
    let log_l = l.ln();
    let (log_mean, _) = tail_statistics(&lam);
    let values = (1..p)
        .map(|q| {
            let fit = T::from_count(p - q + 1) * log_mean[q - 1] - lam[q - 1].ln() - T::from_count(p - q) * log_mean[q];
            -fit + (T::from_count(p - q) + T::lit(0.5)) * log_l / l
        })
        .collect();
    Ok(CriterionCurve::new(CriterionKind::MdlGap, 1, values))
}

/// Population variance of a slice.
fn variance<T: Scalar>(xs: &[T]) -> T {
    let n = T::from_count(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / n
}

/// Ratio of the variances of successive trailing eigenvalue-gap sets,
/// `var(gaps[q+1..P-1]) / var(gaps[q..P-1])`, `+inf` when the denominator
/// vanishes. Evaluated for `q = 1..P-3`.
pub fn sorte<T: Scalar>(spec: &EigSpectrum<T>) -> Result<CriterionCurve<T>> {
    let p = spec.p();
    if p < 4 {
        return Err(Error::InvalidArgument(format!("SORTE needs at least 4 eigenvalues, got {p}")));
    }
    if spec.magnitudes.iter().any(|m| !m.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    // gaps[i-1] = |lambda_i| - |lambda_{i+1}|, i = 1..P-1
    let gaps: Vec<T> = spec.magnitudes.windows(2).map(|w| w[0] - w[1]).collect();
    let (first, last) = CriterionKind::Sorte.q_range(p);
    let values = (first..=last)
        .map(|q| {
            let denom = variance(&gaps[q - 1..]);
            if denom == T::zero() {
                T::infinity()
            } else {
                variance(&gaps[q..]) / denom
            }
        })
        .collect();
    Ok(CriterionCurve::new(CriterionKind::Sorte, first, values))
}

pub fn evaluate<T: Scalar>(kind: CriterionKind, spec: &EigSpectrum<T>) -> Result<CriterionCurve<T>> {
    match kind {
        CriterionKind::Mdl => mdl(spec),
        CriterionKind::MdlGap => mdlgap(spec),
        CriterionKind::Sorte => sorte(spec),
    }
}

/// Large-snapshot limit of MDLgap (no penalty term) for ensemble eigenvalues
/// sorted descending, at candidate count `q` in `1..P-1`.
pub fn h_asymptotic<T: Scalar>(ensemble_eigs: &[T], q: usize) -> Result<T> {
    let p = ensemble_eigs.len();
    if p < 2 || q < 1 || q >= p {
        return Err(Error::InvalidArgument(format!("q = {q} outside 1..{} for P = {p}", p.max(1) - 1)));
    }
    if ensemble_eigs.iter().any(|&l| !(l > T::zero()) || !l.is_finite()) {
        return Err(Error::InvalidArgument("ensemble eigenvalues must be positive".into()));
    }
    if ensemble_eigs.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("ensemble eigenvalues must be sorted descending".into()));
    }
    let (log_mean, _) = tail_statistics(ensemble_eigs);
    Ok(-(T::from_count(p - q + 1) * log_mean[q - 1] - ensemble_eigs[q - 1].ln() - T::from_count(p - q) * log_mean[q]))
}

/// `f(x) = (P - D + x) log(x SNR / (P - D + x) + 1)` for `x >= 0`, `P > D`.
pub fn f_concave<T: Scalar>(x: T, p: usize, d: usize, snr: T) -> Result<T> {
    if p <= d {
        return Err(Error::InvalidArgument(format!("need P > D, got P = {p}, D = {d}")));
    }
    if !(x >= T::zero()) || !(snr >= T::zero()) {
        return Err(Error::InvalidArgument("x and SNR must be non-negative".into()));
    }
    let span = T::from_count(p - d) + x;
    Ok(span * (x * snr / span).ln_1p())
}
