//! Wideband source enumeration for sparse linear arrays in snapshot-starved,
//! underdetermined scenes.
//!
//! The processing chain averages narrowband spatial periodograms across
//! frequency, recovers the coarray correlation by an inverse spatial Fourier
//! transform, populates a Hermitian Toeplitz augmented covariance by lag
//! redundancy averaging, and enumerates sources from its eigenvalue
//! magnitudes with MDL, MDLgap or SORTE.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision instantiation.

pub mod acm;
pub mod config;
pub mod criteria;
pub mod error;
pub mod export;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod pipeline;
pub mod scalar;
pub mod spectral;
pub mod synth;

pub use acm::{AcmKind, AugmentedCovariance, EigSpectrum};
pub use config::Config;
pub use criteria::{CriterionCurve, CriterionKind};
pub use error::{Error, Result};
pub use geometry::{ArrayGeometry, Coarray};
pub use harness::{DetectionStats, Method, Sweep, SweepParameter};
pub use pipeline::{CriterionSnapshots, EnumerationResult, PipelineOptions, Strategy};
pub use scalar::Scalar;
pub use spectral::{CorrelationVector, Periodogram, SampleCovariance, UGrid};
pub use synth::{ArrayManifold, Scenario, SnapshotTensor, Source};

pub type Scenario64 = Scenario<f64>;
pub type SnapshotTensor64 = SnapshotTensor<f64>;
pub type Periodogram64 = Periodogram<f64>;
pub type CorrelationVector64 = CorrelationVector<f64>;
pub type AugmentedCovariance64 = AugmentedCovariance<f64>;
pub type EigSpectrum64 = EigSpectrum<f64>;
pub type CriterionCurve64 = CriterionCurve<f64>;
pub type EnumerationResult64 = EnumerationResult<f64>;
pub type Sweep64 = Sweep<f64>;

pub type Scenario32 = Scenario<f32>;
pub type SnapshotTensor32 = SnapshotTensor<f32>;
pub type EigSpectrum32 = EigSpectrum<f32>;
pub type EnumerationResult32 = EnumerationResult<f32>;
