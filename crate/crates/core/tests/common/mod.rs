//! Reference solver for tests: explicit Euler with a tiny step, written
//! against plain arrays so it shares no code with the crate under test.

#![allow(dead_code)]

/// Rates with kappa as a plain float; `f64::INFINITY` gives `v / kappa = 0`.
#[derive(Debug, Clone, Copy)]
pub struct Rates {
    pub beta: f64,
    pub gamma: f64,
    pub rho: f64,
    pub omega: f64,
    pub kappa: f64,
}

pub const PAPER: Rates = Rates {
    beta: 1.6,
    gamma: 0.8,
    rho: 0.12,
    omega: 0.2,
    kappa: 0.8,
};

pub fn rhs(p: &Rates, [s, i, r, v]: [f64; 4]) -> [f64; 4] {
    let push = p.rho * (1.0 - v / p.kappa);
    [
        -p.beta * s * i - push * s + p.omega * r,
        p.beta * s * i - p.gamma * i,
        p.gamma * i - p.omega * r - push * r,
        push * (s + r),
    ]
}

/// Explicit Euler from t = 0 with step `h`, sampled every `every` steps.
/// Returns `(t, state)` pairs including t = 0.
pub fn euler(p: &Rates, x0: [f64; 4], h: f64, steps: usize, every: usize) -> Vec<(f64, [f64; 4])> {
    let mut x = x0;
    let mut out = vec![(0.0, x)];
    for n in 1..=steps {
        let d = rhs(p, x);
        for k in 0..4 {
            x[k] += h * d[k];
        }
        if n % every == 0 {
            out.push((n as f64 * h, x));
        }
    }
    out
}

pub fn sup_diff(a: [f64; 4], b: [f64; 4]) -> f64 {
    (0..4).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
}
