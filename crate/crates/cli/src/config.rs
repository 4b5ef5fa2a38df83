//! TOML run configuration.
//!
//! ```toml
//! format_version = 1
//!
//! [params]
//! beta = 1.6
//! gamma = 0.8
//! rho = 0.12
//! omega = 0.2
//! kappa = 0.8        # or "inf"
//!
//! [initial]
//! s = 0.99
//! i = 0.01
//! r = 0.0
//! v = 0.0
//!
//! [integration]
//! t0 = 0.0
//! t_end = 100.0
//! dt = 0.01
//! record_stride = 1
//!
//! [sweep]
//! experiment = "THRESHOLD"
//! grid = [0.1, 0.5, "inf"]
//! threshold = 0.001
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sirsvk::sweep::ERADICATION_THRESHOLD;
use sirsvk::SUM_TOLERANCE;
use sirsvk::{validate_params, validate_state, ExperimentId, ExperimentSpec, IntegrationConfig, Kappa, Params, State};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

fn format_version() -> u32 {
    FORMAT_VERSION
}

fn eradication_threshold() -> f64 {
    ERADICATION_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: ExperimentId,
    #[serde(default)]
    pub grid: Vec<Kappa>,
    #[serde(default = "eradication_threshold")]
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "format_version")]
    pub format_version: u32,
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<State>,
    #[serde(default)]
    pub integration: IntegrationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

impl RunConfig {
    /// Parses and validates a configuration document.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Layers `overrides` (a TOML document) on top of `self`; keys present in
    /// the document replace the corresponding values, tables merge recursively.
    pub fn overlay(&self, overrides: &str) -> Result<Self, CliError> {
        let patch: toml::Table = overrides
            .parse()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        let mut base = toml::Table::try_from(self).map_err(|e| CliError::Config(e.to_string()))?;
        merge(&mut base, patch);
        let cfg: RunConfig = toml::Value::Table(base)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The defaults behind one of the published figures.
    pub fn paper_figure(figure: u8) -> Result<Self, CliError> {
        let spec = ExperimentSpec::paper_figure(figure)
            .ok_or_else(|| CliError::Config(format!("--paper-figure must be one of 2, 3, 4, 5, 6 (got {figure})")))?;
        Ok(RunConfig {
            format_version: FORMAT_VERSION,
            params: spec.params,
            initial: Some(spec.initial),
            integration: spec.integration,
            sweep: Some(SweepConfig {
                experiment: spec.experiment,
                grid: spec.grid,
                threshold: spec.threshold,
            }),
            output: None,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config always serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Config(format!(
                "format_version {} is not supported (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        validate_params(&self.params).map_err(|e| CliError::Validation(format!("params: {e}")))?;
        self.integration
            .validate()
            .map_err(|e| CliError::Validation(format!("integration: {e}")))?;
        if let Some(x) = &self.initial {
            validate_state(&self.params, x, SUM_TOLERANCE)
                .map_err(|e| CliError::Validation(format!("initial: {e}")))?;
        }
        if self.sweep.is_some() {
            self.experiment_spec()?
                .validate()
                .map_err(|e| CliError::Validation(format!("sweep: {e}")))?;
        }
        Ok(())
    }

    pub fn initial(&self) -> Result<State, CliError> {
        self.initial
            .ok_or_else(|| CliError::Config("missing table `initial` (fields s, i, r, v)".into()))
    }

    pub fn experiment_spec(&self) -> Result<ExperimentSpec, CliError> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::Config("missing table `sweep` (field `experiment`)".into()))?;
        Ok(ExperimentSpec {
            experiment: sweep.experiment,
            params: self.params,
            initial: self.initial()?,
            grid: sweep.grid.clone(),
            integration: self.integration,
            threshold: sweep.threshold,
        })
    }
}

fn merge(base: &mut toml::Table, patch: toml::Table) {
    for (key, value) in patch {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(p)) => merge(b, p),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG4: &str = r#"
[params]
beta = 1.6
gamma = 0.8
rho = 0.12
omega = 0.2
kappa = 0.8

[initial]
s = 0.99
i = 0.01
r = 0.0
v = 0.0
"#;

    #[test]
    fn minimal_document() {
        let cfg = RunConfig::parse(FIG4).unwrap();
        assert_eq!(cfg.params, Params::new(1.6, 0.8, 0.12, 0.2, Kappa::Finite(0.8)));
        assert_eq!(cfg.integration, IntegrationConfig::default());
        assert_eq!(cfg.format_version, 1);
    }

    #[test]
    fn infinite_kappa_is_a_string() {
        let cfg = RunConfig::parse(&FIG4.replace("kappa = 0.8", "kappa = \"inf\"")).unwrap();
        assert_eq!(cfg.params.kappa, Kappa::Infinite);
        assert!(RunConfig::parse(&FIG4.replace("kappa = 0.8", "kappa = inf")).is_err());
        assert!(RunConfig::parse(&FIG4.replace("kappa = 0.8", "kappa = \"infinity\"")).is_err());
    }

    #[test]
    fn missing_field_is_named() {
        let err = RunConfig::parse(&FIG4.replace("gamma = 0.8\n", "")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("gamma"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::parse(&FIG4.replace("omega = 0.2", "omega = 0.2\ndelta = 1.0")).unwrap_err();
        assert!(err.to_string().contains("delta"), "{err}");
        let err = RunConfig::parse(&format!("colour = 1\n{FIG4}")).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let err = RunConfig::parse(&FIG4.replace("rho = 0.12", "rho = = 0.12")).unwrap_err();
        assert!(err.to_string().contains("line 5"), "{err}");
    }

    #[test]
    fn invalid_values_are_validation_errors() {
        let err = RunConfig::parse(&FIG4.replace("beta = 1.6", "beta = -1.6")).unwrap_err();
        assert!(matches!(err, CliError::Validation(_)));
        assert!(err.to_string().contains("beta"));
        let err = RunConfig::parse(&FIG4.replace("s = 0.99", "s = 0.5")).unwrap_err();
        assert!(err.to_string().contains("sum"), "{err}");
        assert!(RunConfig::parse(&format!("format_version = 9\n{FIG4}")).is_err());
    }

    #[test]
    fn presets_round_trip_through_toml() {
        for fig in 2..=6 {
            let cfg = RunConfig::paper_figure(fig).unwrap();
            let text = cfg.to_toml();
            assert_eq!(RunConfig::parse(&text).unwrap(), cfg, "figure {fig}:\n{text}");
        }
        assert!(RunConfig::paper_figure(1).is_err());
    }

    #[test]
    fn overlay_replaces_only_given_keys() {
        let base = RunConfig::paper_figure(6).unwrap();
        let cfg = base
            .overlay("[integration]\nt_end = 500.0\n[params]\nkappa = \"inf\"")
            .unwrap();
        assert_eq!(cfg.integration.t_end, 500.0);
        assert_eq!(cfg.integration.dt, base.integration.dt);
        assert_eq!(cfg.params.kappa, Kappa::Infinite);
        assert_eq!(cfg.sweep, base.sweep);
        assert!(base.overlay("[params]\nzeta = 1").is_err());
    }
}
