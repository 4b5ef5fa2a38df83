//! Domain types and the vector field of the SIRS-V(kappa) model.
//!
//! The state is the population-fraction vector `(S, I, R, V)`:
//!
//! ```text
//!   dS/dt = -beta*S*I - rho*(1 - V/kappa)*S + omega*R
//!   dI/dt =  beta*S*I - gamma*I
//!   dR/dt =  gamma*I - omega*R - rho*(1 - V/kappa)*R
//!   dV/dt =  rho*(1 - V/kappa)*(S + R)
//! ```
//!
//! `kappa` is the vaccine confidence: the largest fraction of the population
//! that will ever accept vaccination. It may be infinite, in which case the
//! vaccination pressure `(1 - V/kappa)` is the constant 1 (the SIRSV model).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ModelError, Violation};

/// Default tolerance on the simplex constraints at API boundaries.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Vaccine confidence. `Infinite` is the SIRSV limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    Finite(f64),
    Infinite,
}

impl Kappa {
    /// `min(1, kappa)`: the ceiling on the vaccinated fraction.
    pub fn effective(self) -> f64 {
        match self {
            Kappa::Finite(k) => k.min(1.0),
            Kappa::Infinite => 1.0,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Kappa::Finite(k) => Some(k),
            Kappa::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Kappa::Infinite)
    }

    /// Numeric value with `Infinite` mapped to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self {
            Kappa::Finite(k) => k,
            Kappa::Infinite => f64::INFINITY,
        }
    }

    /// Vaccine hesitance `1/kappa`; undefined for infinite confidence.
    pub fn hesitance(self) -> Result<f64, ModelError> {
        match self {
            Kappa::Finite(k) => Ok(1.0 / k),
            Kappa::Infinite => Err(ModelError::UndefinedHesitance),
        }
    }

    /// The factor `1 - v/kappa`, identically 1 when kappa is infinite.
    #[inline]
    pub fn pressure(self, v: f64) -> f64 {
        match self {
            Kappa::Finite(k) => 1.0 - v / k,
            Kappa::Infinite => 1.0,
        }
    }
}

impl PartialOrd for Kappa {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Finite(k) => write!(f, "{k}"),
            Kappa::Infinite => f.write_str("inf"),
        }
    }
}

impl From<f64> for Kappa {
    fn from(k: f64) -> Self {
        if k == f64::INFINITY {
            Kappa::Infinite
        } else {
            Kappa::Finite(k)
        }
    }
}

// Serialized as a plain number, or the string "inf" for the SIRSV limit.
impl Serialize for Kappa {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Kappa::Finite(k) => serializer.serialize_f64(*k),
            Kappa::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Kappa {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct KappaVisitor;

        impl serde::de::Visitor<'_> for KappaVisitor {
            type Value = Kappa;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive number or the string \"inf\"")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Kappa, E> {
                if v.is_infinite() {
                    return Err(E::custom("spell infinite kappa as the string \"inf\""));
                }
                Ok(Kappa::Finite(v))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Kappa, E> {
                Ok(Kappa::Finite(v as f64))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Kappa, E> {
                Ok(Kappa::Finite(v as f64))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Kappa, E> {
                if v == "inf" {
                    Ok(Kappa::Infinite)
                } else {
                    Err(E::invalid_value(serde::de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(KappaVisitor)
    }
}

/// Which member of the model family the parameters describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Variant {
    /// The full model; every rate strictly positive.
    #[default]
    #[serde(rename = "SIRSVK")]
    SirsVk,
    /// No vaccination campaign: `rho` must be exactly zero.
    #[serde(rename = "SIRS")]
    Sirs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Transmission rate.
    pub beta: f64,
    /// Recovery rate.
    pub gamma: f64,
    /// Vaccination roll-out rate.
    pub rho: f64,
    /// Rate at which natural immunity wanes.
    pub omega: f64,
    /// Vaccine confidence.
    pub kappa: Kappa,
    #[serde(default)]
    pub variant: Variant,
}

impl Params {
    pub fn new(beta: f64, gamma: f64, rho: f64, omega: f64, kappa: Kappa) -> Self {
        Params {
            beta,
            gamma,
            rho,
            omega,
            kappa,
            variant: Variant::SirsVk,
        }
    }

    /// The same rates with vaccination switched off.
    pub fn sirs(self) -> Self {
        Params {
            rho: 0.0,
            variant: Variant::Sirs,
            ..self
        }
    }

    pub fn with_kappa(self, kappa: Kappa) -> Self {
        Params { kappa, ..self }
    }

    pub fn kappa_eff(&self) -> f64 {
        self.kappa.effective()
    }

    /// Vaccinated level the equilibria are built around: `min(1, kappa)`,
    /// or zero when there is no vaccination at all.
    pub(crate) fn equilibrium_vaccinated(&self) -> f64 {
        if self.rho == 0.0 {
            0.0
        } else {
            self.kappa_eff()
        }
    }
}

/// Hesitance `1/kappa`, with the infinite-confidence limit reported as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hesitance {
    pub value: f64,
    /// True when `value` is the limit of `1/kappa` as kappa grows without bound.
    pub is_limit: bool,
}

pub fn vaccine_hesitance(p: &Params) -> Hesitance {
    match p.kappa.hesitance() {
        Ok(value) => Hesitance { value, is_limit: false },
        Err(_) => Hesitance {
            value: 0.0,
            is_limit: true,
        },
    }
}

/// Population fractions in each compartment.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct State {
    pub s: f64,
    pub i: f64,
    pub r: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Compartment {
    S,
    I,
    R,
    V,
}

impl Compartment {
    pub const ALL: [Compartment; 4] = [Compartment::S, Compartment::I, Compartment::R, Compartment::V];

    pub fn label(self) -> &'static str {
        match self {
            Compartment::S => "S",
            Compartment::I => "I",
            Compartment::R => "R",
            Compartment::V => "V",
        }
    }
}

impl State {
    pub const fn new(s: f64, i: f64, r: f64, v: f64) -> Self {
        State { s, i, r, v }
    }

    pub fn from_array([s, i, r, v]: [f64; 4]) -> Self {
        State { s, i, r, v }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.s, self.i, self.r, self.v]
    }

    pub fn get(&self, c: Compartment) -> f64 {
        match c {
            Compartment::S => self.s,
            Compartment::I => self.i,
            Compartment::R => self.r,
            Compartment::V => self.v,
        }
    }

    pub fn sum(&self) -> f64 {
        self.s + self.i + self.r + self.v
    }

    pub fn sup_distance(&self, other: &State) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest amount by which the state violates the admissible set for `p`.
    /// Zero for a state inside it; NaN for a non-finite state.
    pub fn excursion(&self, p: &Params) -> f64 {
        let a = self.to_array();
        if a.iter().any(|x| !x.is_finite()) {
            return f64::NAN;
        }
        let below = a.iter().map(|x| -x).fold(0.0, f64::max);
        let above = a.iter().map(|x| x - 1.0).fold(0.0, f64::max);
        let v_over = (self.v - p.kappa_eff()).max(0.0);
        below.max(above).max(v_over).max((self.sum() - 1.0).abs())
    }

    /// Snap a state that is admissible within `tol` onto the bounds.
    /// Components below zero are raised to zero and `v` is capped at
    /// `min(1, kappa)`. The simplex sum is left untouched.
    pub fn clamped(&self, p: &Params, tol: f64) -> Result<State, ModelError> {
        validate_state(p, self, tol)?;
        let ceiling = p.kappa_eff();
        Ok(State {
            s: self.s.clamp(0.0, 1.0),
            i: self.i.clamp(0.0, 1.0),
            r: self.r.clamp(0.0, 1.0),
            v: self.v.clamp(0.0, ceiling),
        })
    }

    pub(crate) fn axpy(&self, h: f64, d: &Derivative) -> State {
        State {
            s: self.s + h * d.ds,
            i: self.i + h * d.di,
            r: self.r + h * d.dr,
            v: self.v + h * d.dv,
        }
    }
}

/// Time derivative of a [`State`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Derivative {
    pub ds: f64,
    pub di: f64,
    pub dr: f64,
    pub dv: f64,
}

impl Derivative {
    pub fn to_array(self) -> [f64; 4] {
        [self.ds, self.di, self.dr, self.dv]
    }

    pub fn sum(&self) -> f64 {
        self.ds + self.di + self.dr + self.dv
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Right-hand side of the model. Performs no validation; see
/// [`vector_field_checked`] for the boundary version.
#[inline]
pub fn vector_field(p: &Params, x: &State) -> Derivative {
    let infection = p.beta * x.s * x.i;
    let recovery = p.gamma * x.i;
    let waning = p.omega * x.r;
    let vaccination = p.rho * p.kappa.pressure(x.v);
    Derivative {
        ds: -infection - vaccination * x.s + waning,
        di: infection - recovery,
        dr: recovery - waning - vaccination * x.r,
        dv: vaccination * (x.s + x.r),
    }
}

pub fn vector_field_checked(p: &Params, x: &State) -> Result<Derivative, ModelError> {
    validate_params(p)?;
    validate_state(p, x, SUM_TOLERANCE)?;
    Ok(vector_field(p, x))
}

fn positive(field: &'static str, value: f64, out: &mut Vec<Violation>) {
    if !(value.is_finite() && value > 0.0) {
        out.push(Violation::new(field, format!("must be > 0 and finite, got {value}")));
    }
}

/// Collects every parameter violation rather than stopping at the first.
pub fn validate_params(p: &Params) -> Result<(), ModelError> {
    let mut violations = Vec::new();
    positive("beta", p.beta, &mut violations);
    positive("gamma", p.gamma, &mut violations);
    positive("omega", p.omega, &mut violations);
    match p.variant {
        Variant::SirsVk => positive("rho", p.rho, &mut violations),
        Variant::Sirs => {
            if p.rho != 0.0 {
                violations.push(Violation::new(
                    "rho",
                    format!("must be 0 in the SIRS variant, got {}", p.rho),
                ));
            }
        }
    }
    if let Kappa::Finite(k) = p.kappa {
        positive("kappa", k, &mut violations);
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ModelError::InvalidParams(violations))
    }
}

/// Checks membership in the admissible set within `tol`.
pub fn validate_state(p: &Params, x: &State, tol: f64) -> Result<(), ModelError> {
    let mut violations = Vec::new();
    for c in Compartment::ALL {
        let value = x.get(c);
        if !value.is_finite() {
            violations.push(Violation::new(c.label(), format!("is not finite ({value})")));
        } else if value < -tol {
            violations.push(Violation::new(c.label(), format!("is negative ({value})")));
        } else if value > 1.0 + tol {
            violations.push(Violation::new(c.label(), format!("exceeds 1 ({value})")));
        }
    }
    let sum = x.sum();
    if !((sum - 1.0).abs() <= tol) {
        violations.push(Violation::new("sum", format!("S+I+R+V = {sum}, expected 1")));
    }
    let ceiling = p.kappa_eff();
    if x.v > ceiling + tol {
        violations.push(Violation::new(
            "V",
            format!("{} exceeds min(1, kappa) = {ceiling}", x.v),
        ));
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ModelError::InvalidState(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn paper() -> Params {
        Params::new(1.6, 0.8, 0.12, 0.2, Kappa::Finite(0.8))
    }

    #[test]
    fn dfe_is_a_fixed_point() {
        let d = vector_field(&paper(), &State::new(0.2, 0.0, 0.0, 0.8));
        assert_eq!(d.to_array(), [0.0; 4]);
    }

    #[test]
    fn hand_evaluated_field() {
        let d = vector_field(&paper(), &State::new(0.54, 0.41, 0.05, 0.0));
        assert_abs_diff_eq!(d.ds, -0.40904, epsilon = 1e-14);
        assert_abs_diff_eq!(d.di, 0.02624, epsilon = 1e-14);
        assert_abs_diff_eq!(d.dr, 0.312, epsilon = 1e-14);
        assert_abs_diff_eq!(d.dv, 0.0708, epsilon = 1e-14);
        assert!(d.sum().abs() < 1e-14);
    }

    #[test]
    fn vaccination_stops_at_confidence() {
        let p = paper().with_kappa(Kappa::Finite(0.5));
        for (s, r) in [(0.5, 0.0), (0.1, 0.3), (0.0, 0.2)] {
            let x = State::new(s, 0.5 - s - r, r, 0.5);
            assert_eq!(vector_field(&p, &x).dv, 0.0);
        }
    }

    #[test]
    fn accepts_omega_three() {
        let p = Params { omega: 3.0, ..paper() };
        assert!(validate_params(&p).is_ok());
        let d = vector_field(&p, &State::new(0.54, 0.41, 0.05, 0.0));
        assert_abs_diff_eq!(d.ds, -0.35424 - 0.0648 + 0.15, epsilon = 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(validate_params(&paper()).is_ok());
        assert!(validate_params(&paper().with_kappa(Kappa::Infinite)).is_ok());

        let err = validate_params(&Params { gamma: 0.0, ..paper() }).unwrap_err();
        match err {
            ModelError::InvalidParams(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].field, "gamma");
            }
            other => panic!("unexpected {other:?}"),
        }

        let err = validate_params(&Params {
            beta: -1.0,
            rho: 0.0,
            kappa: Kappa::Finite(0.0),
            ..paper()
        })
        .unwrap_err();
        let fields: Vec<_> = match err {
            ModelError::InvalidParams(v) => v.into_iter().map(|v| v.field).collect(),
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(fields, ["beta", "rho", "kappa"]);
    }

    #[test]
    fn zero_rho_needs_sirs_variant() {
        assert!(validate_params(&Params { rho: 0.0, ..paper() }).is_err());
        assert!(validate_params(&paper().sirs()).is_ok());
        let bad = Params {
            rho: 0.1,
            variant: Variant::Sirs,
            ..paper()
        };
        assert!(validate_params(&bad).is_err());
    }

    #[test]
    fn state_validation() {
        let p = paper();
        assert!(validate_state(&p, &State::new(0.54, 0.41, 0.05, 0.0), SUM_TOLERANCE).is_ok());
        assert!(matches!(
            validate_state(&p, &State::new(0.5, 0.5, 0.5, 0.5), SUM_TOLERANCE),
            Err(ModelError::InvalidState(_))
        ));
        let p = p.with_kappa(Kappa::Finite(0.5));
        let err = validate_state(&p, &State::new(0.1, 0.1, 0.0, 0.8), SUM_TOLERANCE).unwrap_err();
        assert!(err.to_string().contains("min(1, kappa)"), "{err}");
    }

    #[test]
    fn clamp_within_tolerance() {
        let p = paper();
        let x = State::new(0.2 - 5e-10, -1e-10, 0.0, 0.8 + 5e-10);
        let c = x.clamped(&p, SUM_TOLERANCE).unwrap();
        assert_eq!(c.v, 0.8);
        assert_eq!(c.i, 0.0);
        assert!(State::new(0.2, 0.0, 0.0, 0.81).clamped(&p, SUM_TOLERANCE).is_err());
    }

    #[test]
    fn hesitance() {
        let h = vaccine_hesitance(&paper());
        assert_eq!(
            h,
            Hesitance {
                value: 1.25,
                is_limit: false
            }
        );
        assert_eq!(vaccine_hesitance(&paper().with_kappa(Kappa::Finite(1.0))).value, 1.0);
        let h = vaccine_hesitance(&paper().with_kappa(Kappa::Infinite));
        assert_eq!(
            h,
            Hesitance {
                value: 0.0,
                is_limit: true
            }
        );
        assert!(matches!(
            Kappa::Infinite.hesitance(),
            Err(ModelError::UndefinedHesitance)
        ));
    }

    #[test]
    fn checked_field_rejects_bad_input() {
        assert!(vector_field_checked(&Params { beta: 0.0, ..paper() }, &State::new(1.0, 0.0, 0.0, 0.0)).is_err());
        assert!(vector_field_checked(&paper(), &State::new(0.9, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn kappa_order_puts_infinity_last() {
        assert!(Kappa::Finite(1e300) < Kappa::Infinite);
        assert!(Kappa::Finite(0.1) < Kappa::Finite(0.2));
        assert_eq!(Kappa::from(f64::INFINITY), Kappa::Infinite);
    }
}
