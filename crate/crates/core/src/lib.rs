//! Deterministic simulation and analysis of the SIRS-V(kappa) epidemic model,
//! an SIRS model with a vaccinated compartment whose size is capped by the
//! population's vaccine confidence `kappa`.
//!
//! - [`model`]: parameter and state types, validation, the vector field.
//! - [`integrator`]: fixed-step RK4 and trajectory observables.
//! - [`analysis`]: closed-form equilibria, reproduction numbers, stability.
//! - [`sweep`]: confidence sweeps behind the published experiments.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod integrator;
pub mod model;
pub mod sweep;

pub use analysis::{classify, dfe, eep, r0, rt, rt_upper_bound, Equilibrium, EquilibriumKind, StabilityVerdict};
pub use error::{IntegrationError, ModelError, SweepError, Violation};
pub use exec::Execution;
pub use integrator::{first_time_below, integrate, peak, Crossing, IntegrationConfig, Peak, Trajectory};
pub use model::{
    vaccine_hesitance, validate_params, validate_state, vector_field, Compartment, Derivative, Kappa, Params, State,
    Variant, SUM_TOLERANCE,
};
pub use sweep::{ExperimentId, ExperimentSpec, SweepRecord};
