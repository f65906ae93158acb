//! Steady-state parameter sweeps over one or two axes, with per-point regime
//! classification and deterministic, order-preserving results.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{classify, BlockadeVerdict, ClassifyTolerances};
use crate::fock::{FockError, HilbertSpace};
use crate::liouvillian::{
    build_liouvillian, observables, steady_state, Observables, SolverError, SolverOptions,
};
use crate::model::{build_collapse_channels, build_hamiltonian, ModelError, SystemParams};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid axis: {0}")]
    InvalidAxis(String),
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown sweep parameter `{0}`")]
    UnknownParam(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("no converged point carries the requested metric")]
    NoUsablePoints,
    #[error("failed to build worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A sweepable scalar parameter. `NTh` sets the thermal occupation of all
/// three modes at once; sweeping `E` sweeps its real part (phase zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "delta_a")]
    DeltaA,
    #[serde(rename = "delta_b")]
    DeltaB,
    #[serde(rename = "delta_c")]
    DeltaC,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "f_a")]
    FA,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "kappa_a")]
    KappaA,
    #[serde(rename = "kappa_b")]
    KappaB,
    #[serde(rename = "kappa_c")]
    KappaC,
    #[serde(rename = "n_th_a")]
    NThA,
    #[serde(rename = "n_th_b")]
    NThB,
    #[serde(rename = "n_th_c")]
    NThC,
    #[serde(rename = "n_th")]
    NTh,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::DeltaA => "delta_a",
            SweepParam::DeltaB => "delta_b",
            SweepParam::DeltaC => "delta_c",
            SweepParam::G => "g",
            SweepParam::FA => "f_a",
            SweepParam::E => "e",
            SweepParam::KappaA => "kappa_a",
            SweepParam::KappaB => "kappa_b",
            SweepParam::KappaC => "kappa_c",
            SweepParam::NThA => "n_th_a",
            SweepParam::NThB => "n_th_b",
            SweepParam::NThC => "n_th_c",
            SweepParam::NTh => "n_th",
        }
    }

    /// Writes `value` into the corresponding field of `params`.
    pub fn apply(&self, params: &mut SystemParams, value: f64) {
        match self {
            SweepParam::DeltaA => params.delta_a = value,
            SweepParam::DeltaB => params.delta_b = value,
            SweepParam::DeltaC => params.delta_c = value,
            SweepParam::G => params.g = value,
            SweepParam::FA => params.f_a = value,
            SweepParam::E => params.e = num_complex::Complex64::new(value, 0.0),
            SweepParam::KappaA => params.kappa_a = value,
            SweepParam::KappaB => params.kappa_b = value,
            SweepParam::KappaC => params.kappa_c = value,
            SweepParam::NThA => params.n_th_a = value,
            SweepParam::NThB => params.n_th_b = value,
            SweepParam::NThC => params.n_th_c = value,
            SweepParam::NTh => {
                params.n_th_a = value;
                params.n_th_b = value;
                params.n_th_c = value;
            }
        }
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        Ok(match s {
            "delta_a" => SweepParam::DeltaA,
            "delta_b" => SweepParam::DeltaB,
            "delta_c" => SweepParam::DeltaC,
            "g" => SweepParam::G,
            "f_a" => SweepParam::FA,
            "e" => SweepParam::E,
            "kappa_a" => SweepParam::KappaA,
            "kappa_b" => SweepParam::KappaB,
            "kappa_c" => SweepParam::KappaC,
            "n_th_a" => SweepParam::NThA,
            "n_th_b" => SweepParam::NThB,
            "n_th_c" => SweepParam::NThC,
            "n_th" => SweepParam::NTh,
            other => return Err(SweepError::UnknownParam(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// One sweep axis: `count` points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl AxisSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.count < 2 {
            return Err(SweepError::InvalidAxis(format!(
                "axis over {} needs at least 2 points, got {}",
                self.param, self.count
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(SweepError::InvalidAxis(format!(
                "axis over {} has non-finite endpoints",
                self.param
            )));
        }
        if self.start == self.stop {
            return Err(SweepError::InvalidAxis(format!(
                "axis over {} has equal endpoints {}",
                self.param, self.start
            )));
        }
        if self.spacing == Spacing::Log && self.start * self.stop <= 0.0 {
            return Err(SweepError::InvalidAxis(format!(
                "log axis over {} needs endpoints of one sign, got {} and {}",
                self.param, self.start, self.stop
            )));
        }
        Ok(())
    }

    /// The grid values, endpoints included exactly (up to rounding for log
    /// spacing).
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start * (1.0 - t) + self.stop * t,
                    Spacing::Log => {
                        let sign = self.start.signum();
                        let (a, b) = (self.start.abs().ln(), self.stop.abs().ln());
                        sign * (a * (1.0 - t) + b * t).exp()
                    }
                }
            })
            .collect()
    }
}

fn default_truncation() -> [usize; 3] {
    [5, 5, 5]
}

fn default_workers() -> usize {
    1
}

/// Where to write sweep results; unset formats are skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// A reference curve to carry alongside the data (e.g. a closed-form optimum
/// across a 2-D map), stored as (axis1, value) pairs in result metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayCurve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default)]
    pub base: SystemParams,
    pub axis1: AxisSpec,
    #[serde(default)]
    pub axis2: Option<AxisSpec>,
    #[serde(default = "default_truncation")]
    pub truncation: [usize; 3],
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub outputs: OutputSpec,
    #[serde(default = "default_workers")]
    pub parallel_workers: usize,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub overlay: Option<OverlayCurve>,
}

impl SweepConfig {
    /// A 1-D sweep of `axis1` around `base` with library defaults elsewhere.
    pub fn new(base: SystemParams, axis1: AxisSpec) -> Self {
        Self {
            base,
            axis1,
            axis2: None,
            truncation: default_truncation(),
            solver: SolverOptions::default(),
            outputs: OutputSpec::default(),
            parallel_workers: default_workers(),
            notes: Vec::new(),
            overlay: None,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        self.base.validate()?;
        self.axis1.validate()?;
        if let Some(axis2) = &self.axis2 {
            axis2.validate()?;
            if axis2.param == self.axis1.param {
                return Err(SweepError::InvalidConfig(format!(
                    "both axes sweep {}",
                    axis2.param
                )));
            }
        }
        if self.truncation.contains(&0) {
            return Err(SweepError::InvalidConfig(format!(
                "truncation {:?} has a zero dimension",
                self.truncation
            )));
        }
        if self.parallel_workers == 0 {
            return Err(SweepError::InvalidConfig(
                "parallel_workers must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Parses a TOML sweep description.
    pub fn from_toml(text: &str) -> Result<Self, SweepError> {
        let config: SweepConfig =
            toml::from_str(text).map_err(|e| SweepError::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }
}

/// One evaluated grid point. On failure `converged` is false, the error text
/// is recorded, and every observable stays empty; values are never carried
/// over from neighboring points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub axis1: f64,
    #[serde(default)]
    pub axis2: Option<f64>,
    pub converged: bool,
    pub mean_n_a: Option<f64>,
    pub g2: Option<f64>,
    pub g3: Option<f64>,
    pub residual: Option<f64>,
    pub regime: Option<String>,
    #[serde(default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// The configuration that produced the data, echoed verbatim.
    pub config: SweepConfig,
    /// Points in row-major order: axis1 outer, axis2 inner.
    pub points: Vec<SweepPoint>,
    /// Wall-clock duration of the sweep; informational only and excluded
    /// from any determinism comparison.
    pub wall_time_seconds: f64,
    pub version: String,
}

/// Solves one parameter point on the given truncation and classifies it.
pub fn evaluate_point(
    params: &SystemParams,
    truncation: [usize; 3],
    solver: &SolverOptions,
) -> Result<(Observables, BlockadeVerdict), SweepError> {
    let space = HilbertSpace::new(truncation)?;
    let h = build_hamiltonian(params, space);
    let channels = build_collapse_channels(params, space)?;
    let lv = build_liouvillian(&h, &channels)?;
    let rho = steady_state(&lv, solver)?;
    let obs = observables(&rho, &lv)?;
    let verdict = classify(params, obs.g2, obs.g3, &ClassifyTolerances::default());
    Ok((obs, verdict))
}

/// Runs the sweep on `parallel_workers` threads. Results keep grid order and
/// are bitwise independent of the worker count, since every point is solved
/// by the same single-threaded code path.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult, SweepError> {
    config.validate()?;
    let started = Instant::now();

    let axis1_values = config.axis1.values();
    let axis2_values: Vec<Option<f64>> = match &config.axis2 {
        Some(axis) => axis.values().into_iter().map(Some).collect(),
        None => vec![None],
    };

    let grid: Vec<(f64, Option<f64>)> = axis1_values
        .iter()
        .flat_map(|&v1| axis2_values.iter().map(move |&v2| (v1, v2)))
        .collect();

    let solve_one = |&(v1, v2): &(f64, Option<f64>)| -> SweepPoint {
        let mut params = config.base;
        config.axis1.param.apply(&mut params, v1);
        if let (Some(axis2), Some(value)) = (&config.axis2, v2) {
            axis2.param.apply(&mut params, value);
        }
        match evaluate_point(&params, config.truncation, &config.solver) {
            Ok((obs, verdict)) => SweepPoint {
                axis1: v1,
                axis2: v2,
                converged: true,
                mean_n_a: Some(obs.mean_n_a),
                g2: obs.g2,
                g3: obs.g3,
                residual: Some(obs.residual),
                regime: Some(verdict.label()),
                error: None,
            },
            Err(e) => SweepPoint {
                axis1: v1,
                axis2: v2,
                converged: false,
                mean_n_a: None,
                g2: None,
                g3: None,
                residual: None,
                regime: None,
                error: Some(e.to_string()),
            },
        }
    };

    let points: Vec<SweepPoint> = if config.parallel_workers == 1 {
        grid.iter().map(solve_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallel_workers)
            .build()
            .map_err(|e| SweepError::Pool(e.to_string()))?;
        pool.install(|| grid.par_iter().map(solve_one).collect())
    };

    Ok(SweepResult {
        config: config.clone(),
        points,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Which observable an extremum search ranks by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    MeanNA,
    G2,
    G3,
}

impl Metric {
    fn value(&self, point: &SweepPoint) -> Option<f64> {
        match self {
            Metric::MeanNA => point.mean_n_a,
            Metric::G2 => point.g2,
            Metric::G3 => point.g3,
        }
    }
}

fn find_extremum(
    result: &SweepResult,
    metric: Metric,
    better: impl Fn(f64, f64) -> bool,
) -> Result<(usize, &SweepPoint), SweepError> {
    let mut best: Option<(usize, f64)> = None;
    for (idx, point) in result.points.iter().enumerate() {
        if !point.converged {
            continue;
        }
        let Some(value) = metric.value(point) else { continue };
        // Strict comparison: ties resolve to the earliest grid index.
        if best.is_none_or(|(_, b)| better(value, b)) {
            best = Some((idx, value));
        }
    }
    let (idx, _) = best.ok_or(SweepError::NoUsablePoints)?;
    Ok((idx, &result.points[idx]))
}

/// Converged point with the smallest metric; ties go to the smallest index.
pub fn find_minimum(result: &SweepResult, metric: Metric) -> Result<(usize, &SweepPoint), SweepError> {
    find_extremum(result, metric, |v, best| v < best)
}

/// Converged point with the largest metric; ties go to the smallest index.
pub fn find_maximum(result: &SweepResult, metric: Metric) -> Result<(usize, &SweepPoint), SweepError> {
    find_extremum(result, metric, |v, best| v > best)
}
