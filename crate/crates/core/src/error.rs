use std::fmt;

use thiserror::Error;

/// One failed constraint on a named field.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub reason: String,
}

impl Violation {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        Violation {
            field,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.field, self.reason)
    }
}

struct Joined<'a>(&'a [Violation]);

impl fmt::Display for Joined<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, v) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {}", Joined(.0))]
    InvalidParams(Vec<Violation>),
    #[error("state outside the admissible set: {}", Joined(.0))]
    InvalidState(Vec<Violation>),
    #[error("vaccine hesitance is undefined for infinite confidence")]
    UndefinedHesitance,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid integration config: {0}")]
    Config(String),
    #[error(
        "integration diverged at step {step} (t = {time}): state left the admissible set by {excursion:e}; reduce dt"
    )]
    Divergence { step: usize, time: f64, excursion: f64 },
    #[error("trajectory is empty")]
    EmptyTrajectory,
    #[error("threshold must lie in (0, 1), got {0}")]
    Threshold(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("kappa = {kappa}: {source}")]
    Point {
        kappa: String,
        #[source]
        source: IntegrationError,
    },
}
