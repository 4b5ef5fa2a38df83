//! Fixed-step classical Runge-Kutta integration and trajectory observables.

use serde::{Deserialize, Serialize};

use crate::error::IntegrationError;
use crate::model::{validate_params, vector_field, Compartment, Params, State, SUM_TOLERANCE};

/// Excursions beyond this many multiples of [`SUM_TOLERANCE`] abort a run.
pub const DIVERGENCE_FACTOR: f64 = 1e3;

/// Value the eradication-time column carries when the threshold is never crossed.
pub const NOT_REACHED_SENTINEL: f64 = -10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegrationConfig {
    pub t0: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Store every `record_stride`-th step. The final step is always stored.
    pub record_stride: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            t0: 0.0,
            t_end: 100.0,
            dt: 0.01,
            record_stride: 1,
        }
    }
}

impl IntegrationConfig {
    pub fn new(t0: f64, t_end: f64, dt: f64) -> Self {
        IntegrationConfig {
            t0,
            t_end,
            dt,
            record_stride: 1,
        }
    }

    pub fn with_stride(self, record_stride: usize) -> Self {
        IntegrationConfig { record_stride, ..self }
    }

    pub fn validate(&self) -> Result<(), IntegrationError> {
        let err = |m: String| Err(IntegrationError::Config(m));
        if !(self.t0.is_finite() && self.t_end.is_finite()) {
            return err(format!(
                "t0 and t_end must be finite, got {} and {}",
                self.t0, self.t_end
            ));
        }
        if !(self.t_end > self.t0) {
            return err(format!("t_end ({}) must exceed t0 ({})", self.t_end, self.t0));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return err(format!("dt must be > 0, got {}", self.dt));
        }
        if self.dt > self.t_end - self.t0 {
            return err(format!(
                "dt ({}) exceeds the horizon ({})",
                self.dt,
                self.t_end - self.t0
            ));
        }
        if self.record_stride == 0 {
            return err("record_stride must be a positive integer".into());
        }
        Ok(())
    }

    /// Number of steps; a trailing partial step is counted when the horizon
    /// is not a whole multiple of `dt`.
    pub fn steps(&self) -> usize {
        let exact = (self.t_end - self.t0) / self.dt;
        let nearest = exact.round();
        if (exact - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            exact.ceil() as usize
        }
    }

    fn time_at(&self, step: usize, steps: usize) -> f64 {
        if step == steps {
            self.t_end
        } else {
            self.t0 + step as f64 * self.dt
        }
    }
}

/// Solution of one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub params: Params,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&State> {
        self.states.last()
    }

    pub fn series(&self, c: Compartment) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(move |x| x.get(c))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &State)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    /// Largest `|S+I+R+V - 1|` over the stored states.
    pub fn max_sum_drift(&self) -> f64 {
        self.states.iter().map(|x| (x.sum() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// One classical RK4 step of size `h`.
#[inline]
pub fn rk4_step(p: &Params, x: &State, h: f64) -> State {
    let k1 = vector_field(p, x);
    let k2 = vector_field(p, &x.axpy(0.5 * h, &k1));
    let k3 = vector_field(p, &x.axpy(0.5 * h, &k2));
    let k4 = vector_field(p, &x.axpy(h, &k3));
    let w = h / 6.0;
    State {
        s: x.s + w * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds),
        i: x.i + w * (k1.di + 2.0 * k2.di + 2.0 * k3.di + k4.di),
        r: x.r + w * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr),
        v: x.v + w * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
    }
}

/// Integrates from `x0` over `cfg`, clamping each accepted step back onto
/// the admissible set. A step that leaves the set by more than
/// `DIVERGENCE_FACTOR * SUM_TOLERANCE` is reported as divergence.
pub fn integrate(p: &Params, x0: &State, cfg: &IntegrationConfig) -> Result<Trajectory, IntegrationError> {
    validate_params(p)?;
    cfg.validate()?;
    let mut x = x0.clamped(p, SUM_TOLERANCE)?;

    let steps = cfg.steps();
    let capacity = steps / cfg.record_stride + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    times.push(cfg.t0);
    states.push(x);

    let limit = DIVERGENCE_FACTOR * SUM_TOLERANCE;
    let mut t = cfg.t0;
    for step in 1..=steps {
        let t_next = cfg.time_at(step, steps);
        let next = rk4_step(p, &x, t_next - t);
        let excursion = next.excursion(p);
        if !(excursion <= limit) {
            return Err(IntegrationError::Divergence {
                step,
                time: t_next,
                excursion,
            });
        }
        x = next.clamped(p, limit)?;
        t = t_next;
        if step % cfg.record_stride == 0 || step == steps {
            times.push(t);
            states.push(x);
        }
    }

    Ok(Trajectory {
        times,
        states,
        params: *p,
    })
}

/// Outcome of a threshold-crossing search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    At(f64),
    NotReached,
}

impl Crossing {
    pub fn time(self) -> Option<f64> {
        match self {
            Crossing::At(t) => Some(t),
            Crossing::NotReached => None,
        }
    }

    /// Encodes `NotReached` as [`NOT_REACHED_SENTINEL`].
    pub fn or_sentinel(self) -> f64 {
        self.time().unwrap_or(NOT_REACHED_SENTINEL)
    }
}

/// First recorded time at which the compartment is strictly below `threshold`.
/// Resolution is the recording grid; there is no interpolation.
pub fn first_time_below(traj: &Trajectory, c: Compartment, threshold: f64) -> Result<Crossing, IntegrationError> {
    if traj.is_empty() {
        return Err(IntegrationError::EmptyTrajectory);
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(IntegrationError::Threshold(threshold));
    }
    Ok(traj
        .iter()
        .find(|(_, x)| x.get(c) < threshold)
        .map_or(Crossing::NotReached, |(t, _)| Crossing::At(t)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub value: f64,
    pub time: f64,
}

/// Maximum recorded value and the earliest time it is attained.
pub fn peak(traj: &Trajectory, c: Compartment) -> Result<Peak, IntegrationError> {
    let mut it = traj.iter();
    let (t0, x0) = it.next().ok_or(IntegrationError::EmptyTrajectory)?;
    let mut best = Peak {
        value: x0.get(c),
        time: t0,
    };
    for (t, x) in it {
        let value = x.get(c);
        if value > best.value {
            best = Peak { value, time: t };
        }
    }
    Ok(best)
}
