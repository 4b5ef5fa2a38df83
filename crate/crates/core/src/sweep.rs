//! Parameter sweeps over vaccine confidence.
//!
//! Each experiment integrates the model once per grid point. Grid points are
//! independent, so they are evaluated through [`Execution`] and merged back
//! in grid order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::threshold_at;
use crate::error::SweepError;
use crate::exec::Execution;
use crate::integrator::{first_time_below, integrate, peak, Crossing, IntegrationConfig, Peak, Trajectory};
use crate::model::{validate_params, validate_state, Compartment, Kappa, Params, State, SUM_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentId {
    /// Vaccinated fraction over time for several confidence levels.
    #[serde(rename = "KAPPA_V")]
    KappaV,
    /// Infected fraction over time for several confidence levels.
    #[serde(rename = "KAPPA_I")]
    KappaI,
    /// SIRS against SIRSV against SIRS-V(kappa).
    #[serde(rename = "MODEL_COMPARE")]
    ModelCompare,
    /// Height and time of the infection peak against kappa.
    #[serde(rename = "PEAK_VS_KAPPA")]
    PeakVsKappa,
    /// Time for I to fall below a threshold against `(1 - kappa) beta / gamma`.
    #[serde(rename = "THRESHOLD")]
    Threshold,
}

impl ExperimentId {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::KappaV => "KAPPA_V",
            ExperimentId::KappaI => "KAPPA_I",
            ExperimentId::ModelCompare => "MODEL_COMPARE",
            ExperimentId::PeakVsKappa => "PEAK_VS_KAPPA",
            ExperimentId::Threshold => "THRESHOLD",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Default threshold on I for the eradication-time observable.
pub const ERADICATION_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: ExperimentId,
    pub params: Params,
    pub initial: State,
    /// Confidence levels, strictly increasing. Unused by `ModelCompare`.
    pub grid: Vec<Kappa>,
    pub integration: IntegrationConfig,
    /// Threshold on I used by `Threshold`.
    pub threshold: f64,
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n)
                .map(|k| if k == n - 1 { end } else { start + k as f64 * step })
                .collect()
        }
    }
}

const PAPER_PARAMS: Params = Params {
    beta: 1.6,
    gamma: 0.8,
    rho: 0.12,
    omega: 0.2,
    kappa: Kappa::Finite(0.8),
    variant: crate::model::Variant::SirsVk,
};

impl ExperimentSpec {
    /// The setup behind one of the published figures (2 through 6).
    pub fn paper_figure(figure: u8) -> Option<Self> {
        let id = match figure {
            2 => ExperimentId::KappaV,
            3 => ExperimentId::KappaI,
            4 => ExperimentId::ModelCompare,
            5 => ExperimentId::PeakVsKappa,
            6 => ExperimentId::Threshold,
            _ => return None,
        };
        Some(Self::paper_default(id))
    }

    pub fn paper_default(experiment: ExperimentId) -> Self {
        let base = IntegrationConfig::new(0.0, 100.0, 0.01);
        let (params, initial, grid, integration) = match experiment {
            ExperimentId::KappaV | ExperimentId::KappaI => (
                Params {
                    omega: 3.0,
                    ..PAPER_PARAMS
                },
                State::new(0.54, 0.41, 0.05, 0.0),
                [0.1, 0.3, 0.5, 0.6, 0.8, 1.2]
                    .into_iter()
                    .map(Kappa::Finite)
                    .chain([Kappa::Infinite])
                    .collect(),
                base.with_stride(10),
            ),
            ExperimentId::ModelCompare => (
                PAPER_PARAMS,
                State::new(0.99, 0.01, 0.0, 0.0),
                Vec::new(),
                base.with_stride(10),
            ),
            ExperimentId::PeakVsKappa => (
                PAPER_PARAMS,
                State::new(0.99, 0.01, 0.0, 0.0),
                linspace(0.05, 2.0, 60)
                    .into_iter()
                    .map(Kappa::Finite)
                    .chain([Kappa::Infinite])
                    .collect(),
                base,
            ),
            ExperimentId::Threshold => (
                PAPER_PARAMS,
                State::new(0.7, 0.3, 0.0, 0.0),
                linspace(0.05, 1.0, 60).into_iter().map(Kappa::Finite).collect(),
                base,
            ),
        };
        ExperimentSpec {
            experiment,
            params,
            initial,
            grid,
            integration,
            threshold: ERADICATION_THRESHOLD,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let spec_err = |m: String| Err(SweepError::Spec(m));
        validate_params(&self.params)?;
        if let Err(e) = self.integration.validate() {
            return spec_err(e.to_string());
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return spec_err(format!("threshold must lie in (0, 1), got {}", self.threshold));
        }
        if self.experiment == ExperimentId::ModelCompare {
            validate_state(&self.params, &self.initial, SUM_TOLERANCE)?;
            return validate_state(&self.params.with_kappa(Kappa::Infinite), &self.initial, SUM_TOLERANCE)
                .map_err(Into::into);
        }
        let Some(first) = self.grid.first() else {
            return spec_err(format!("{} needs a non-empty kappa grid", self.experiment));
        };
        if let Some(w) = self.grid.windows(2).find(|w| !(w[0] < w[1])) {
            return spec_err(format!(
                "kappa grid must be strictly increasing ({} then {})",
                w[0], w[1]
            ));
        }
        if self.experiment == ExperimentId::Threshold && self.grid.iter().any(|k| k.is_infinite()) {
            return spec_err("THRESHOLD sweeps need finite kappa values".into());
        }
        for &kappa in &self.grid {
            validate_params(&self.params.with_kappa(kappa))?;
        }
        validate_state(&self.params.with_kappa(*first), &self.initial, SUM_TOLERANCE)?;
        Ok(())
    }

    fn expect(&self, allowed: &[ExperimentId]) -> Result<(), SweepError> {
        if !allowed.contains(&self.experiment) {
            return Err(SweepError::Spec(format!(
                "{} cannot be run by this sweep (expected one of {:?})",
                self.experiment,
                allowed.iter().map(|e| e.name()).collect::<Vec<_>>()
            )));
        }
        self.validate()
    }

    fn run_point(&self, kappa: Kappa) -> Result<Trajectory, SweepError> {
        integrate(&self.params.with_kappa(kappa), &self.initial, &self.integration).map_err(|source| {
            SweepError::Point {
                kappa: kappa.to_string(),
                source,
            }
        })
    }
}

/// One row of a tabular sweep result.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub swept: f64,
    pub observables: Vec<(&'static str, f64)>,
}

impl SweepRecord {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.observables.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaRun {
    pub kappa: Kappa,
    pub outcome: Result<Trajectory, SweepError>,
}

/// One trajectory per grid point. A failing point is reported in its slot and
/// the remaining points still run.
pub fn run_kappa_trajectories(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<KappaRun>, SweepError> {
    spec.expect(&[ExperimentId::KappaV, ExperimentId::KappaI])?;
    Ok(exec.map(&spec.grid, |&kappa| KappaRun {
        kappa,
        outcome: spec.run_point(kappa),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelLabel {
    Sirs,
    Sirsv,
    SirsVk,
}

impl ModelLabel {
    pub const ALL: [ModelLabel; 3] = [ModelLabel::Sirs, ModelLabel::Sirsv, ModelLabel::SirsVk];

    pub fn label(self) -> &'static str {
        match self {
            ModelLabel::Sirs => "SIRS",
            ModelLabel::Sirsv => "SIRSV",
            ModelLabel::SirsVk => "SIRSVK",
        }
    }

    /// The member of the family derived from the base parameters.
    pub fn params(self, base: &Params) -> Params {
        match self {
            ModelLabel::Sirs => base.sirs(),
            ModelLabel::Sirsv => base.with_kappa(Kappa::Infinite),
            ModelLabel::SirsVk => *base,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTrajectory {
    pub model: ModelLabel,
    pub trajectory: Trajectory,
}

/// Runs SIRS (no vaccination), SIRSV (unbounded confidence) and SIRS-V(kappa)
/// from the same initial state, in that order.
pub fn run_model_compare(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<LabeledTrajectory>, SweepError> {
    spec.expect(&[ExperimentId::ModelCompare])?;
    exec.map(&ModelLabel::ALL, |&model| {
        integrate(&model.params(&spec.params), &spec.initial, &spec.integration)
            .map(|trajectory| LabeledTrajectory { model, trajectory })
            .map_err(|source| SweepError::Point {
                kappa: format!("{} model", model.label()),
                source,
            })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakPoint {
    pub kappa: Kappa,
    pub peak: Peak,
}

impl PeakPoint {
    pub fn record(&self) -> SweepRecord {
        SweepRecord {
            swept: self.kappa.as_f64(),
            observables: vec![("peak_I", self.peak.value), ("peak_t", self.peak.time)],
        }
    }
}

pub fn run_peak_vs_kappa(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<PeakPoint>, SweepError> {
    spec.expect(&[ExperimentId::PeakVsKappa])?;
    exec.map(&spec.grid, |&kappa| {
        let traj = spec.run_point(kappa)?;
        let peak = peak(&traj, Compartment::I).map_err(|source| SweepError::Point {
            kappa: kappa.to_string(),
            source,
        })?;
        Ok(PeakPoint { kappa, peak })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPoint {
    pub kappa: Kappa,
    /// `(1 - kappa) * beta / gamma`.
    pub threshold_value: f64,
    pub eradication: Crossing,
}

impl ThresholdPoint {
    pub fn record(&self) -> SweepRecord {
        SweepRecord {
            swept: self.threshold_value,
            observables: vec![
                ("kappa", self.kappa.as_f64()),
                ("eradication_time", self.eradication.or_sentinel()),
            ],
        }
    }
}

/// Eradication time per grid point, ordered by increasing threshold value.
pub fn run_threshold_sweep(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<ThresholdPoint>, SweepError> {
    spec.expect(&[ExperimentId::Threshold])?;
    let mut points = exec
        .map(&spec.grid, |&kappa| {
            let traj = spec.run_point(kappa)?;
            let eradication =
                first_time_below(&traj, Compartment::I, spec.threshold).map_err(|source| SweepError::Point {
                    kappa: kappa.to_string(),
                    source,
                })?;
            Ok(ThresholdPoint {
                kappa,
                threshold_value: threshold_at(&spec.params, kappa),
                eradication,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>, SweepError>>()?;
    points.sort_by(|a, b| a.threshold_value.total_cmp(&b.threshold_value));
    Ok(points)
}
