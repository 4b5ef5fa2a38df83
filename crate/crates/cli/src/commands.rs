use sirsvk::sweep::{
    run_kappa_trajectories, run_model_compare, run_peak_vs_kappa, run_threshold_sweep, SweepRecord,
    ERADICATION_THRESHOLD,
};
use sirsvk::{
    classify, dfe, eep, integrate, r0, rt, rt_upper_bound, vaccine_hesitance, Execution, ExperimentId, ExperimentSpec,
    IntegrationError, State, SweepError,
};

use crate::config::RunConfig;
use crate::csv::{self, format_number};
use crate::CliError;

/// CSV text plus any grid points that failed while the rest completed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub failures: Vec<String>,
}

impl From<String> for Report {
    fn from(csv: String) -> Self {
        Report {
            csv,
            failures: Vec::new(),
        }
    }
}

fn integration_error(e: IntegrationError) -> CliError {
    match e {
        IntegrationError::Divergence { .. } => CliError::Divergence(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

fn sweep_error(e: SweepError) -> CliError {
    match e {
        SweepError::Point {
            source: IntegrationError::Divergence { .. },
            ..
        } => CliError::Divergence(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Report, CliError> {
    let traj = integrate(&cfg.params, &cfg.initial()?, &cfg.integration).map_err(integration_error)?;
    Ok(csv::trajectory(&traj).into())
}

fn state_cells(prefix: &str, x: Option<&State>) -> Vec<(String, String)> {
    ["S", "I", "R", "V"]
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let value = x.map_or_else(|| "NONE".to_string(), |x| format_number(x.to_array()[k]));
            (format!("{prefix}_{c}"), value)
        })
        .collect()
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = &cfg.params;
    let verdict = classify(p);
    let hesitance = vaccine_hesitance(p);

    let mut rows: Vec<(String, String)> = vec![
        ("r0".into(), format_number(r0(p))),
        ("threshold_value".into(), format_number(verdict.threshold_value)),
        ("dfe_gas".into(), verdict.dfe_gas.to_string()),
        ("eep_exists".into(), verdict.eep_exists.to_string()),
    ];
    rows.extend(state_cells("dfe", Some(&dfe(p).state)));
    rows.extend(state_cells("eep", eep(p).as_ref().map(|e| &e.state)));
    rows.push(("hesitance".into(), format_number(hesitance.value)));
    rows.push(("hesitance_is_limit".into(), hesitance.is_limit.to_string()));
    if let Some(x) = &cfg.initial {
        rows.push(("rt".into(), format_number(rt(p, x))));
        rows.push(("rt_upper_bound".into(), format_number(rt_upper_bound(p, x))));
    }
    Ok(csv::key_values(rows.iter().map(|(k, v)| (k.as_str(), v.clone()))).into())
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = cfg.experiment_spec()?;
    let exec = Execution::default();
    match spec.experiment {
        ExperimentId::KappaV | ExperimentId::KappaI => {
            let runs = run_kappa_trajectories(&spec, exec).map_err(sweep_error)?;
            let mut failures = Vec::new();
            let mut ok = Vec::new();
            for run in &runs {
                match &run.outcome {
                    Ok(traj) => ok.push((run.kappa.as_f64(), traj)),
                    Err(e) => failures.push(e.to_string()),
                }
            }
            Ok(Report {
                csv: csv::kappa_trajectories(ok),
                failures,
            })
        }
        ExperimentId::ModelCompare => cmd_compare(cfg),
        ExperimentId::PeakVsKappa => {
            let points = run_peak_vs_kappa(&spec, exec).map_err(sweep_error)?;
            let records: Vec<SweepRecord> = points.iter().map(|p| p.record()).collect();
            Ok(csv::records(&records).into())
        }
        ExperimentId::Threshold => {
            let points = run_threshold_sweep(&spec, exec).map_err(sweep_error)?;
            let records: Vec<SweepRecord> = points.iter().map(|p| p.record()).collect();
            Ok(csv::records(&records).into())
        }
    }
}

/// Runs the three-model comparison regardless of the configured experiment.
pub fn cmd_compare(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = ExperimentSpec {
        experiment: ExperimentId::ModelCompare,
        params: cfg.params,
        initial: cfg.initial()?,
        grid: Vec::new(),
        integration: cfg.integration,
        threshold: ERADICATION_THRESHOLD,
    };
    let runs = run_model_compare(&spec, Execution::default()).map_err(sweep_error)?;
    Ok(csv::comparison(&runs).into())
}
