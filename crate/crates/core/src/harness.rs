//! Monte Carlo sweeps over snapshots, SNR or source separation.
//!
//! Every trial draws a fresh seed from `(master_seed, sweep index, grid index,
//! trial index)`, so results do not depend on how trials are scheduled. Trials
//! run on a rayon pool and are reduced in `(grid, trial)` order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acm::EigSpectrum;
use crate::criteria::{evaluate, CriterionKind};
use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;
use crate::pipeline::{ap_spectrum, iss_from_spectra, iss_spectra, nb_spectrum, EnumerationResult, PipelineOptions, Strategy};
use crate::scalar::Scalar;
use crate::synth::{nine_source_directions, synthesize, uniform_band, Scenario, Source};

/// Two-sided 95% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Snapshots per bin `L`.
    Snapshots,
    /// Common per-source SNR in dB.
    SnrDb,
    /// `u` offset of the second source from the first.
    SeparationU,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Snapshots => "snapshots",
            SweepParameter::SnrDb => "snr_db",
            SweepParameter::SeparationU => "separation_u",
        }
    }
}

impl std::fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snapshots" => Ok(SweepParameter::Snapshots),
            "snr_db" => Ok(SweepParameter::SnrDb),
            "separation_u" => Ok(SweepParameter::SeparationU),
            _ => Err(Error::Config(format!(
                "unknown sweep parameter '{s}' (expected snapshots, snr_db or separation_u)"
            ))),
        }
    }
}

/// A (strategy, criterion) pair evaluated on every trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Method {
    pub strategy: Strategy,
    pub criterion: CriterionKind,
}

impl Method {
    pub fn new(strategy: Strategy, criterion: CriterionKind) -> Self {
        Self { strategy, criterion }
    }

    /// Every combination of the given strategies and criteria, strategy-major.
    pub fn grid(strategies: &[Strategy], criteria: &[CriterionKind]) -> Vec<Method> {
        strategies
            .iter()
            .flat_map(|&s| criteria.iter().map(move |&c| Method::new(s, c)))
            .collect()
    }

    /// File-name friendly label such as `ap_mdlgap`.
    pub fn label(&self) -> String {
        format!("{}_{}", self.strategy.name(), self.criterion.name())
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}+{}",
            self.strategy.name().to_ascii_uppercase(),
            self.criterion.name().to_ascii_uppercase()
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep<T> {
    pub name: String,
    /// Position of this sweep within a preset, mixed into trial seeds.
    pub index: u64,
    pub template: Scenario<T>,
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    pub options: PipelineOptions,
}

impl<T: Scalar> Sweep<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("sweep '{}': {msg}", self.name)));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.grid.is_empty() {
            return bad("grid is empty".into());
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return bad("grid values must be finite".into());
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("grid must be strictly increasing".into());
        }
        if self.methods.is_empty() {
            return bad("no strategy/criterion pairs requested".into());
        }
        for &value in &self.grid {
            self.scenario_at(value)?;
        }
        Ok(())
    }

    /// The template with the swept parameter set to `value`.
    pub fn scenario_at(&self, value: f64) -> Result<Scenario<T>> {
        let mut scenario = self.template.clone();
        match self.parameter {
            SweepParameter::Snapshots => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::Config(format!("snapshot count {value} is not a positive integer")));
                }
                scenario.snapshots = value as usize;
            }
            SweepParameter::SnrDb => scenario = scenario.with_common_snr_db(T::lit(value)),
            SweepParameter::SeparationU => {
                if scenario.sources.len() < 2 {
                    return Err(Error::Config("separation sweep needs at least two sources".into()));
                }
                scenario.sources[1].u = scenario.sources[0].u + T::lit(value);
            }
        }
        scenario.validate().map_err(|e| Error::Config(format!("{} = {value}: {e}", self.parameter)))?;
        Ok(scenario)
    }

    pub fn trial_seed(&self, grid_index: usize, trial: usize) -> u64 {
        trial_seed(self.master_seed, self.index, grid_index as u64, trial as u64)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable per-trial seed.
pub fn trial_seed(master_seed: u64, sweep_index: u64, grid_index: u64, trial: u64) -> u64 {
    [sweep_index, grid_index, trial]
        .into_iter()
        .fold(splitmix64(master_seed), |h, x| splitmix64(h ^ x))
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionPoint {
    pub grid_value: f64,
    pub detect_count: usize,
    pub trials: usize,
    pub p_detect: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl DetectionPoint {
    pub fn new(grid_value: f64, detect_count: usize, trials: usize) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(detect_count, trials);
        Self {
            grid_value,
            detect_count,
            trials,
            p_detect: detect_count as f64 / trials as f64,
            ci_lo,
            ci_hi,
        }
    }
}

/// Detection curve of one method along the sweep grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodStats {
    pub method: Method,
    pub points: Vec<DetectionPoint>,
}

impl MethodStats {
    pub fn at(&self, grid_value: f64) -> Option<&DetectionPoint> {
        self.points.iter().find(|p| p.grid_value == grid_value)
    }

    /// First grid value whose detection probability reaches `level`.
    pub fn first_reaching(&self, level: f64) -> Option<f64> {
        self.points.iter().find(|p| p.p_detect >= level).map(|p| p.grid_value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionStats {
    pub sweep: String,
    pub parameter: SweepParameter,
    pub true_count: usize,
    pub methods: Vec<MethodStats>,
}

impl DetectionStats {
    pub fn method(&self, strategy: Strategy, criterion: CriterionKind) -> Option<&MethodStats> {
        self.methods
            .iter()
            .find(|m| m.method.strategy == strategy && m.method.criterion == criterion)
    }
}

type StageResult<T> = std::result::Result<T, (&'static str, Error)>;

/// Eigen-spectra of one trial, computed once per strategy and shared by all
/// criteria.
struct TrialSpectra<T> {
    ap: Option<EigSpectrum<T>>,
    iss: Option<Vec<EigSpectrum<T>>>,
    nb: Option<EigSpectrum<T>>,
}

impl<T: Scalar> TrialSpectra<T> {
    fn compute(sweep: &Sweep<T>, scenario: &Scenario<T>, seed: u64) -> StageResult<Self> {
        let wants = |s: Strategy| sweep.methods.iter().any(|m| m.strategy == s);
        let stage = |name: &'static str| move |e: Error| (name, e);
        let wideband = if wants(Strategy::Ap) || wants(Strategy::Iss) {
            Some(synthesize(scenario, seed).map_err(stage("synthesis"))?)
        } else {
            None
        };
        let ap = match &wideband {
            Some(x) if wants(Strategy::Ap) => Some(ap_spectrum(x, &sweep.options).map_err(stage("ap"))?),
            _ => None,
        };
        let iss = match &wideband {
            Some(x) if wants(Strategy::Iss) => Some(iss_spectra(x, &sweep.options).map_err(stage("iss"))?),
            _ => None,
        };
        let nb = if wants(Strategy::Nb) {
            let x = synthesize(&scenario.narrowband_equivalent(), seed).map_err(stage("synthesis"))?;
            Some(nb_spectrum(&x).map_err(stage("nb"))?)
        } else {
            None
        };
        Ok(Self { ap, iss, nb })
    }

    fn result(&self, method: Method) -> StageResult<EnumerationResult<T>> {
        let missing = || Error::InvalidArgument(format!("{} spectrum not computed", method.strategy));
        let stage = method.strategy.name();
        match method.strategy {
            Strategy::Ap => run_spectrum(Strategy::Ap, method.criterion, self.ap.clone().ok_or_else(missing)),
            Strategy::Nb => run_spectrum(Strategy::Nb, method.criterion, self.nb.clone().ok_or_else(missing)),
            Strategy::Iss => self
                .iss
                .as_ref()
                .ok_or_else(missing)
                .and_then(|s| iss_from_spectra(method.criterion, s)),
        }
        .map_err(|e| (stage, e))
    }
}

fn run_spectrum<T: Scalar>(
    strategy: Strategy,
    criterion: CriterionKind,
    spectrum: Result<EigSpectrum<T>>,
) -> Result<EnumerationResult<T>> {
    let spectrum = spectrum?;
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

/// Estimates of every method on one trial, in method order.
fn run_trial<T: Scalar>(sweep: &Sweep<T>, scenario: &Scenario<T>, seed: u64) -> StageResult<Vec<usize>> {
    let spectra = TrialSpectra::compute(sweep, scenario, seed)?;
    sweep.methods.iter().map(|&m| spectra.result(m).map(|r| r.estimate)).collect()
}

/// Runs every trial of `sweep` on the current rayon pool.
pub fn run_sweep<T: Scalar>(sweep: &Sweep<T>) -> Result<DetectionStats> {
    sweep.validate()?;
    let scenarios = sweep
        .grid
        .iter()
        .map(|&v| sweep.scenario_at(v))
        .collect::<Result<Vec<_>>>()?;
    let true_count = sweep.template.source_count();

    let jobs: Vec<(usize, usize)> = (0..sweep.grid.len())
        .flat_map(|g| (0..sweep.trials).map(move |t| (g, t)))
        .collect();
    let estimates: Vec<Vec<usize>> = jobs
        .par_iter()
        .map(|&(g, t)| {
            run_trial(sweep, &scenarios[g], sweep.trial_seed(g, t)).map_err(|(stage, source)| Error::Trial {
                grid_index: g,
                grid_value: sweep.grid[g],
                trial: t,
                stage,
                source: Box::new(source),
            })
        })
        .collect::<Result<_>>()?;

    let methods = sweep
        .methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let points = sweep
                .grid
                .iter()
                .enumerate()
                .map(|(g, &value)| {
                    let trials = &estimates[g * sweep.trials..(g + 1) * sweep.trials];
                    let hits = trials.iter().filter(|e| e[k] == true_count).count();
                    DetectionPoint::new(value, hits, sweep.trials)
                })
                .collect();
            MethodStats { method, points }
        })
        .collect();

    Ok(DetectionStats {
        sweep: sweep.name.clone(),
        parameter: sweep.parameter,
        true_count,
        methods,
    })
}

/// Runs `sweep` on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads<T: Scalar>(sweep: &Sweep<T>, threads: usize) -> Result<DetectionStats> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_sweep(sweep))
}

/// Full results of every method on the first trial of each grid point.
pub fn sample_results<T: Scalar>(sweep: &Sweep<T>) -> Result<Vec<(f64, Vec<EnumerationResult<T>>)>> {
    sweep.validate()?;
    sweep
        .grid
        .iter()
        .enumerate()
        .map(|(g, &value)| {
            let scenario = sweep.scenario_at(value)?;
            let spectra = TrialSpectra::compute(sweep, &scenario, sweep.trial_seed(g, 0)).map_err(|(_, e)| e)?;
            let results = sweep
                .methods
                .iter()
                .map(|&m| spectra.result(m).map_err(|(_, e)| e))
                .collect::<Result<Vec<_>>>()?;
            Ok((value, results))
        })
        .collect()
}

pub const PRESET_NAMES: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];
pub const DEFAULT_MASTER_SEED: u64 = 2024;

/// 41 bins from 80 Hz to 120 Hz around a 100 Hz design frequency.
pub fn reference_band<T: Scalar>() -> Vec<T> {
    uniform_band(T::lit(80.0), T::lit(120.0), 41).expect("valid band")
}

/// Scenario on the six-sensor minimum redundancy array with unit noise and
/// the reference band, sources at 0 dB.
pub fn reference_scenario<T: Scalar>(directions: &[f64], snapshots: usize) -> Result<Scenario<T>> {
    Scenario::new(
        ArrayGeometry::mra6(),
        directions
            .iter()
            .map(|&u| Source {
                u: T::lit(u),
                power: T::one(),
            })
            .collect(),
        T::one(),
        reference_band(),
        T::lit(100.0),
        T::lit(343.0),
        snapshots,
    )
}

fn preset_sweep<T: Scalar>(
    name: &str,
    index: u64,
    template: Scenario<T>,
    parameter: SweepParameter,
    grid: Vec<f64>,
    trials: usize,
) -> Sweep<T> {
    Sweep {
        name: name.to_string(),
        index,
        template,
        parameter,
        grid,
        trials,
        methods: Method::grid(&[Strategy::Ap, Strategy::Iss, Strategy::Nb], &CriterionKind::ALL),
        master_seed: DEFAULT_MASTER_SEED,
        options: PipelineOptions::default(),
    }
}

/// Named figure presets. Each preset is one or more sweeps.
pub fn figure_scenarios<T: Scalar>(name: &str) -> Result<Vec<Sweep<T>>> {
    let sweeps = match name {
        "fig2" => vec![
            preset_sweep(
                "fig2_close",
                0,
                reference_scenario(&[0.0, 0.05], 3)?,
                SweepParameter::SeparationU,
                vec![0.05],
                100,
            ),
            preset_sweep(
                "fig2_wide",
                1,
                reference_scenario(&[0.0, 0.3], 3)?,
                SweepParameter::SeparationU,
                vec![0.3],
                100,
            ),
        ],
        "fig3" => vec![preset_sweep(
            "fig3",
            0,
            reference_scenario(&[0.0, 0.2], 3)?,
            SweepParameter::SeparationU,
            (1..=40).map(|i| i as f64 / 100.0).collect(),
            200,
        )],
        "fig4" => vec![preset_sweep(
            "fig4",
            0,
            reference_scenario(&nine_source_directions(), 1)?,
            SweepParameter::Snapshots,
            (1..=10).map(|l| l as f64).collect(),
            500,
        )],
        "fig5" => vec![preset_sweep(
            "fig5",
            0,
            reference_scenario(&nine_source_directions(), 5)?,
            SweepParameter::SnrDb,
            (-16..=4).step_by(2).map(|s| s as f64).collect(),
            500,
        )],
        _ => {
            return Err(Error::Config(format!(
                "unknown preset '{name}' (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(sweeps)
}
