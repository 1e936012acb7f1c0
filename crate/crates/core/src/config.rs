//! TOML scenario and sweep descriptions.
//!
//! ```toml
//! [geometry]
//! preset = "mra6"            # or positions = [1, 2, 5, 6, 12, 14]
//!
//! [sources]
//! u = [0.0, 0.3]
//! snr_db = 0.0               # or power_db = [0.0, -3.0]
//!
//! [band]
//! f_lo = 80.0
//! f_hi = 120.0
//! bins = 41
//! f_center = 100.0
//!
//! [processing]
//! snapshots = 3
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::acm::AcmKind;
use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;
use crate::harness::{Method, Sweep, SweepParameter, DEFAULT_MASTER_SEED};
use crate::pipeline::{CriterionSnapshots, PipelineOptions, Strategy};
use crate::scalar::Scalar;
use crate::spectral::DEFAULT_GRID_SIZE;
use crate::synth::{uniform_band, Scenario, Source};

pub const DEFAULT_SPEED: f64 = 343.0;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub geometry: GeometryConfig,
    pub sources: SourcesConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    pub band: BandConfig,
    #[serde(default)]
    pub processing: ProcessingConfig,
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub preset: Option<String>,
    pub positions: Option<Vec<i64>>,
    /// Propagation speed in m/s.
    #[serde(default = "default_speed")]
    pub speed: f64,
}

fn default_speed() -> f64 {
    DEFAULT_SPEED
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourcesConfig {
    pub u: Vec<f64>,
    /// Common SNR relative to the noise power.
    pub snr_db: Option<f64>,
    /// Absolute per-source power.
    pub power_db: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub power: Option<f64>,
    pub power_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandConfig {
    pub f_lo: f64,
    pub f_hi: f64,
    pub bins: usize,
    pub f_center: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessingConfig {
    /// Snapshots per bin.
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
    #[serde(default = "default_grid")]
    pub u_grid: usize,
    /// ACM used by the AP strategy.
    #[serde(default = "default_ap_acm")]
    pub acm: AcmKind,
    /// ACM used by the ISS strategy.
    #[serde(default = "default_iss_acm")]
    pub iss_acm: AcmKind,
    #[serde(default)]
    pub criterion_snapshots: CriterionSnapshots,
    #[serde(default = "default_strategy")]
    pub strategy: Strategy,
    #[serde(default = "default_criterion")]
    pub criterion: CriterionKind,
    #[serde(default)]
    pub seed: u64,
}

fn default_snapshots() -> usize {
    1
}
fn default_grid() -> usize {
    DEFAULT_GRID_SIZE
}
fn default_ap_acm() -> AcmKind {
    AcmKind::Lra
}
fn default_iss_acm() -> AcmKind {
    AcmKind::Ss
}
fn default_strategy() -> Strategy {
    Strategy::Ap
}
fn default_criterion() -> CriterionKind {
    CriterionKind::MdlGap
}

impl Default for ProcessingConfig {
    fn default() -> Self {
        Self {
            snapshots: default_snapshots(),
            u_grid: default_grid(),
            acm: default_ap_acm(),
            iss_acm: default_iss_acm(),
            criterion_snapshots: CriterionSnapshots::default(),
            strategy: default_strategy(),
            criterion: default_criterion(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_sweep_name")]
    pub name: String,
    pub parameter: SweepParameter,
    /// Explicit grid; alternatively `start`, `stop` and `step`.
    pub grid: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_master_seed")]
    pub seed: u64,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<Strategy>,
    #[serde(default = "default_criteria")]
    pub criteria: Vec<CriterionKind>,
}

fn default_sweep_name() -> String {
    "sweep".into()
}
fn default_trials() -> usize {
    100
}
fn default_master_seed() -> u64 {
    DEFAULT_MASTER_SEED
}
fn default_strategies() -> Vec<Strategy> {
    vec![Strategy::Ap, Strategy::Iss, Strategy::Nb]
}
fn default_criteria() -> Vec<CriterionKind> {
    CriterionKind::ALL.to_vec()
}

impl SweepConfig {
    pub fn grid(&self) -> Result<Vec<f64>> {
        match (&self.grid, self.start, self.stop, self.step) {
            (Some(g), None, None, None) => Ok(g.clone()),
            (None, Some(start), Some(stop), Some(step)) => {
                if !(step > 0.0) || stop < start {
                    return Err(Error::Config("sweep range needs step > 0 and stop >= start".into()));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                Ok((0..=n).map(|i| start + step * i as f64).collect())
            }
            _ => Err(Error::Config(
                "sweep needs either `grid` or all of `start`, `stop`, `step`".into(),
            )),
        }
    }
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        match (&self.geometry.preset, &self.geometry.positions) {
            (Some(p), None) => p.parse(),
            (None, Some(pos)) => ArrayGeometry::new(pos.clone()),
            _ => Err(Error::Config("[geometry] needs exactly one of `preset` or `positions`".into())),
        }
    }

    fn noise_power(&self) -> Result<f64> {
        match (self.noise.power, self.noise.power_db) {
            (None, None) => Ok(1.0),
            (Some(p), None) => Ok(p),
            (None, Some(db)) => Ok(10f64.powf(db / 10.0)),
            _ => Err(Error::Config("[noise] accepts `power` or `power_db`, not both".into())),
        }
    }

    fn source_powers(&self, noise: f64) -> Result<Vec<f64>> {
        let n = self.sources.u.len();
        match (self.sources.snr_db, &self.sources.power_db) {
            (Some(snr), None) => Ok(vec![noise * 10f64.powf(snr / 10.0); n]),
            (None, Some(db)) if db.len() == n => Ok(db.iter().map(|d| 10f64.powf(d / 10.0)).collect()),
            (None, Some(db)) => Err(Error::Config(format!(
                "[sources] has {n} directions but {} powers",
                db.len()
            ))),
            (None, None) => Ok(vec![noise; n]),
            _ => Err(Error::Config("[sources] accepts `snr_db` or `power_db`, not both".into())),
        }
    }

    pub fn scenario<T: Scalar>(&self) -> Result<Scenario<T>> {
        let noise = self.noise_power()?;
        let powers = self.source_powers(noise)?;
        let b = &self.band;
        let sources = self
            .sources
            .u
            .iter()
            .zip(&powers)
            .map(|(&u, &p)| Source {
                u: T::lit(u),
                power: T::lit(p),
            })
            .collect();
        Scenario::new(
            self.geometry()?,
            sources,
            T::lit(noise),
            uniform_band(T::lit(b.f_lo), T::lit(b.f_hi), b.bins)?,
            T::lit(b.f_center),
            T::lit(self.geometry.speed),
            self.processing.snapshots,
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn options(&self) -> PipelineOptions {
        PipelineOptions {
            grid_size: self.processing.u_grid,
            ap_acm: self.processing.acm,
            iss_acm: self.processing.iss_acm,
            criterion_snapshots: self.processing.criterion_snapshots,
        }
    }

    /// The `[sweep]` section, if present, bound to this scenario.
    pub fn sweep<T: Scalar>(&self) -> Result<Option<Sweep<T>>> {
        let Some(s) = &self.sweep else {
            return Ok(None);
        };
        let sweep = Sweep {
            name: s.name.clone(),
            index: 0,
            template: self.scenario()?,
            parameter: s.parameter,
            grid: s.grid()?,
            trials: s.trials,
            methods: Method::grid(&s.strategies, &s.criteria),
            master_seed: s.seed,
            options: self.options(),
        };
        sweep.validate()?;
        Ok(Some(sweep))
    }
}
