//! Closed-form equilibria, reproduction numbers and the global stability test.
//!
//! With `k = min(1, kappa)` the disease-free equilibrium is `(1 - k, 0, 0, k)`.
//! An endemic equilibrium exists exactly when `(1 - kappa) * beta / gamma > 1`
//! and is then
//!
//! ```text
//!   S = gamma/beta
//!   I = (1 - kappa - gamma/beta) / (1 + gamma/omega)
//!   R = (1 - kappa - gamma/beta) / (1 + omega/gamma)
//!   V = kappa
//! ```
//!
//! The disease-free equilibrium is globally asymptotically stable if and only
//! if the same quantity is at most 1.
//!
//! Without vaccination (`rho = 0`) the vaccinated compartment is frozen; the
//! formulas are evaluated with a vaccinated level of 0, which is the SIRS model
//! started from `V = 0`.

use crate::model::{Kappa, Params, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    DiseaseFree,
    Endemic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub state: State,
    pub exists: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    /// The disease-free equilibrium is globally asymptotically stable.
    pub dfe_gas: bool,
    pub eep_exists: bool,
    /// `(1 - kappa) * beta / gamma`; `-inf` for infinite confidence.
    pub threshold_value: f64,
}

pub fn dfe(p: &Params) -> Equilibrium {
    let k = p.equilibrium_vaccinated();
    Equilibrium {
        kind: EquilibriumKind::DiseaseFree,
        state: State::new(1.0 - k, 0.0, 0.0, k),
        exists: true,
    }
}

/// Vaccinated level entering the endemic formulas, `None` in the SIRSV limit.
fn endemic_kappa(p: &Params) -> Option<f64> {
    if p.rho == 0.0 {
        Some(0.0)
    } else {
        p.kappa.finite()
    }
}

pub fn eep(p: &Params) -> Option<Equilibrium> {
    let kappa = endemic_kappa(p)?;
    let s = p.gamma / p.beta;
    let excess = 1.0 - kappa - s;
    if !(excess > 0.0) {
        return None;
    }
    let i = excess / (1.0 + p.gamma / p.omega);
    let r = excess / (1.0 + p.omega / p.gamma);
    Some(Equilibrium {
        kind: EquilibriumKind::Endemic,
        state: State::new(s, i, r, kappa),
        exists: true,
    })
}

/// Basic reproduction number `beta / gamma`.
pub fn r0(p: &Params) -> f64 {
    p.beta / p.gamma
}

/// Effective reproduction number `S * beta / gamma`.
pub fn rt(p: &Params, x: &State) -> f64 {
    x.s * r0(p)
}

/// `(1 - V) * beta / gamma`, which bounds [`rt`] from above.
pub fn rt_upper_bound(p: &Params, x: &State) -> f64 {
    (1.0 - x.v) * r0(p)
}

pub fn classify(p: &Params) -> StabilityVerdict {
    let threshold_value = match endemic_kappa(p) {
        Some(kappa) => (1.0 - kappa) * p.beta / p.gamma,
        None => f64::NEG_INFINITY,
    };
    let eep_exists = threshold_value > 1.0;
    StabilityVerdict {
        dfe_gas: !eep_exists,
        eep_exists,
        threshold_value,
    }
}

/// `(1 - kappa) * beta / gamma` for an arbitrary confidence, using the other
/// rates of `p`.
pub fn threshold_at(p: &Params, kappa: Kappa) -> f64 {
    classify(&p.with_kappa(kappa)).threshold_value
}
