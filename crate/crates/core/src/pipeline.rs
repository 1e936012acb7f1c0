//! End-to-end enumeration strategies.
//!
//! * **AP**: average the narrowband spatial periodograms over all bins, invert
//!   to a coarray correlation, build the LRA matrix, and apply one criterion.
//! * **ISS**: per bin, build an SS matrix from the sample covariance and
//!   evaluate the criterion; average the per-bin curves.
//! * **NB**: a single bin at the design frequency carrying the full `M L`
//!   snapshot budget, processed via the sample covariance and LRA.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acm::{build_acm, eig_magnitudes, AcmKind, EigSpectrum};
use crate::criteria::{average_curves, evaluate, CriterionCurve, CriterionKind};
use crate::error::{Error, Result};
use crate::geometry::Coarray;
use crate::scalar::Scalar;
use crate::spectral::{
    coarray_correlation, correlation_from_periodogram, scm, wideband_periodogram, UGrid, DEFAULT_GRID_SIZE,
};
use crate::synth::{synthesize, Scenario, SnapshotTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Ap,
    Iss,
    Nb,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Ap => "ap",
            Strategy::Iss => "iss",
            Strategy::Nb => "nb",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ap" => Ok(Strategy::Ap),
            "iss" => Ok(Strategy::Iss),
            "nb" => Ok(Strategy::Nb),
            _ => Err(Error::Config(format!("unknown strategy '{s}' (expected ap, iss or nb)"))),
        }
    }
}

/// Which snapshot count feeds the criteria of the AP strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionSnapshots {
    /// `L` snapshots per bin.
    PerBin,
    /// `M L`: every outer product behind the wideband periodogram.
    #[default]
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub grid_size: usize,
    pub ap_acm: AcmKind,
    pub iss_acm: AcmKind,
    pub criterion_snapshots: CriterionSnapshots,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID_SIZE,
            ap_acm: AcmKind::Lra,
            iss_acm: AcmKind::Ss,
            criterion_snapshots: CriterionSnapshots::Total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationResult<T> {
    pub strategy: Strategy,
    pub criterion: CriterionKind,
    pub estimate: usize,
    pub effective_snapshots: usize,
    /// Criterion curve the estimate was read from (the bin average for ISS).
    pub curve: CriterionCurve<T>,
    /// Per-bin curves, ISS only.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bin_curves: Vec<CriterionCurve<T>>,
    /// Eigenvalue magnitudes behind the curve, AP and NB only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<EigSpectrum<T>>,
}

/// Eigen-spectrum of the AP chain: wideband periodogram, inverse transform,
/// augmented covariance.
pub fn ap_spectrum<T: Scalar>(snapshots: &SnapshotTensor<T>, options: &PipelineOptions) -> Result<EigSpectrum<T>> {
    let coarray = snapshots.array().geometry.coarray();
    let grid = UGrid::new(options.grid_size)?;
    let periodogram = wideband_periodogram(snapshots, &grid)?;
    let r = correlation_from_periodogram(&periodogram, &coarray)?;
    let l_eff = match options.criterion_snapshots {
        CriterionSnapshots::Total => snapshots.bin_count() * snapshots.snapshot_count(),
        CriterionSnapshots::PerBin => snapshots.snapshot_count(),
    };
    eig_magnitudes(&build_acm(&r, options.ap_acm), l_eff)
}

/// Per-bin eigen-spectra of the ISS chain, in bin order.
pub fn iss_spectra<T: Scalar>(snapshots: &SnapshotTensor<T>, options: &PipelineOptions) -> Result<Vec<EigSpectrum<T>>> {
    let coarray = snapshots.array().geometry.coarray();
    (0..snapshots.bin_count())
        .into_par_iter()
        .map(|m| single_bin_spectrum(snapshots, m, &coarray, options.iss_acm))
        .collect()
}

/// Spectrum of the LRA matrix from the sample covariance of one bin.
pub fn nb_spectrum<T: Scalar>(snapshots: &SnapshotTensor<T>) -> Result<EigSpectrum<T>> {
    if snapshots.bin_count() != 1 {
        return Err(Error::InvalidArgument(format!(
            "narrowband processing expects a single bin, got {}",
            snapshots.bin_count()
        )));
    }
    single_bin_spectrum(snapshots, 0, &snapshots.array().geometry.coarray(), AcmKind::Lra)
}

fn single_bin_spectrum<T: Scalar>(
    snapshots: &SnapshotTensor<T>,
    bin: usize,
    coarray: &Coarray,
    kind: AcmKind,
) -> Result<EigSpectrum<T>> {
    let r = coarray_correlation(&scm(snapshots, bin), coarray)?;
    eig_magnitudes(&build_acm(&r, kind), snapshots.snapshot_count())
}

fn from_spectrum<T: Scalar>(
    strategy: Strategy,
    criterion: CriterionKind,
    spectrum: EigSpectrum<T>,
) -> Result<EnumerationResult<T>> {
    let curve = evaluate(criterion, &spectrum)?;
    Ok(EnumerationResult {
        strategy,
        criterion,
        estimate: curve.argmin,
        effective_snapshots: spectrum.effective_snapshots,
        curve,
        bin_curves: Vec::new(),
        spectrum: Some(spectrum),
    })
}

/// Evaluates a criterion on each bin's spectrum and averages the curves.
pub fn iss_from_spectra<T: Scalar>(
    criterion: CriterionKind,
    spectra: &[EigSpectrum<T>],
) -> Result<EnumerationResult<T>> {
    let bin_curves = spectra
        .iter()
        .map(|s| evaluate(criterion, s))
        .collect::<Result<Vec<_>>>()?;
    let curve = average_curves(&bin_curves)?;
    Ok(EnumerationResult {
        strategy: Strategy::Iss,
        criterion,
        estimate: curve.argmin,
        effective_snapshots: spectra[0].effective_snapshots,
        curve,
        bin_curves,
        spectrum: None,
    })
}

pub fn run_ap<T: Scalar>(
    snapshots: &SnapshotTensor<T>,
    criterion: CriterionKind,
    options: &PipelineOptions,
) -> Result<EnumerationResult<T>> {
    from_spectrum(Strategy::Ap, criterion, ap_spectrum(snapshots, options)?)
}

pub fn run_iss<T: Scalar>(
    snapshots: &SnapshotTensor<T>,
    criterion: CriterionKind,
    options: &PipelineOptions,
) -> Result<EnumerationResult<T>> {
    iss_from_spectra(criterion, &iss_spectra(snapshots, options)?)
}

/// NB benchmark on existing single-bin data.
pub fn run_nb_snapshots<T: Scalar>(
    snapshots: &SnapshotTensor<T>,
    criterion: CriterionKind,
) -> Result<EnumerationResult<T>> {
    from_spectrum(Strategy::Nb, criterion, nb_spectrum(snapshots)?)
}

/// NB benchmark: synthesizes the narrowband equivalent of `scenario` (one bin
/// at the center frequency, `M L` snapshots) and processes it.
pub fn run_nb<T: Scalar>(scenario: &Scenario<T>, criterion: CriterionKind, seed: u64) -> Result<EnumerationResult<T>> {
    let x = synthesize(&scenario.narrowband_equivalent(), seed)?;
    run_nb_snapshots(&x, criterion)
}

/// Synthesizes the scenario appropriate to `strategy` and runs it.
pub fn run<T: Scalar>(
    scenario: &Scenario<T>,
    strategy: Strategy,
    criterion: CriterionKind,
    seed: u64,
    options: &PipelineOptions,
) -> Result<EnumerationResult<T>> {
    match strategy {
        Strategy::Ap => run_ap(&synthesize(scenario, seed)?, criterion, options),
        Strategy::Iss => run_iss(&synthesize(scenario, seed)?, criterion, options),
        Strategy::Nb => run_nb(scenario, criterion, seed),
    }
}
