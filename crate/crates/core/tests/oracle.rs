mod common;

use common::{euler, sup_diff, Rates, PAPER};
use sirsvk::{integrate, peak, Compartment, IntegrationConfig, Kappa, Params, State};

fn params(r: &Rates) -> Params {
    Params::new(r.beta, r.gamma, r.rho, r.omega, Kappa::from(r.kappa))
}

/// Max sup-norm gap between RK4 at dt = 0.01 and Euler at dt = 1e-5 on the
/// shared 0.01 grid over [0, t_end].
fn gap_to_euler(r: &Rates, x0: [f64; 4], t_end: f64) -> f64 {
    let cfg = IntegrationConfig::new(0.0, t_end, 0.01);
    let traj = integrate(&params(r), &State::from_array(x0), &cfg).unwrap();
    let steps = (t_end / 1e-5).round() as usize;
    let reference = euler(r, x0, 1e-5, steps, 1000);
    assert_eq!(reference.len(), traj.len());
    traj.states
        .iter()
        .zip(&reference)
        .map(|(x, (_, y))| sup_diff(x.to_array(), *y))
        .fold(0.0, f64::max)
}

#[test]
fn rk4_matches_euler_on_published_setups() {
    let fig23 = |kappa| Rates {
        omega: 3.0,
        kappa,
        ..PAPER
    };
    let cases = [
        (fig23(0.4), [0.54, 0.41, 0.05, 0.0]),
        (fig23(1.2), [0.54, 0.41, 0.05, 0.0]),
        (fig23(f64::INFINITY), [0.54, 0.41, 0.05, 0.0]),
        (PAPER, [0.99, 0.01, 0.0, 0.0]),
        (PAPER, [0.7, 0.3, 0.0, 0.0]),
    ];
    for (r, x0) in cases {
        let gap = gap_to_euler(&r, x0, 100.0);
        assert!(gap < 1e-4, "kappa {} gap {gap:e}", r.kappa);
    }
}

#[test]
fn endemic_run_settles_on_closed_form() {
    // I = (1 - 0.4 - 0.5) / (1 + 0.8/3), R = 0.1 / (1 + 3/0.8)
    let eep = State::new(0.5, 0.1 / (1.0 + 0.8 / 3.0), 0.1 / (1.0 + 3.0 / 0.8), 0.4);
    assert!((eep.i - 0.078947368421052).abs() < 1e-12);
    assert!((eep.r - 0.021052631578947).abs() < 1e-12);
    let p = Params::new(1.6, 0.8, 0.12, 3.0, Kappa::Finite(0.4));
    let traj = integrate(
        &p,
        &State::new(0.54, 0.41, 0.05, 0.0),
        &IntegrationConfig::new(0.0, 200.0, 0.01),
    )
    .unwrap();
    let last = traj.final_state().unwrap();
    assert!(last.sup_distance(&eep) < 1e-3, "{last:?}");
}

// With kappa > 1 the vaccinated fraction closes on 1 at rate rho * (1 - 1/kappa)
// = 0.02, so the run is still ~3.4e-3 away at t = 200 and within 1e-3 by t = 500.
#[test]
fn confidence_above_one_settles_on_full_vaccination() {
    let r = Rates {
        omega: 3.0,
        kappa: 1.2,
        ..PAPER
    };
    let x0 = [0.54, 0.41, 0.05, 0.0];
    let dfe = State::new(0.0, 0.0, 0.0, 1.0);

    let at_200 = integrate(
        &params(&r),
        &State::from_array(x0),
        &IntegrationConfig::new(0.0, 200.0, 0.01),
    )
    .unwrap();
    let oracle = euler(&r, x0, 1e-5, 20_000_000, 20_000_000);
    let last = at_200.final_state().unwrap();
    assert!(sup_diff(last.to_array(), oracle[1].1) < 1e-4);
    assert!((last.sup_distance(&dfe) - 3.3974e-3).abs() < 1e-6, "{last:?}");

    let at_500 = integrate(
        &params(&r),
        &State::from_array(x0),
        &IntegrationConfig::new(0.0, 500.0, 0.01),
    )
    .unwrap();
    assert!(at_500.final_state().unwrap().sup_distance(&dfe) < 1e-3);
}

// Euler oracle (h = 1e-5, sampled every step): I peaks at 0.0574169488539627
// at t = 5.03767.
#[test]
fn infection_peak_matches_oracle() {
    let traj = integrate(
        &params(&PAPER),
        &State::new(0.99, 0.01, 0.0, 0.0),
        &IntegrationConfig::new(0.0, 100.0, 0.01),
    )
    .unwrap();
    let pk = peak(&traj, Compartment::I).unwrap();
    assert!((pk.value - 0.0574169488539627).abs() < 1e-6, "{pk:?}");
    assert!((pk.time - 5.03767).abs() <= 0.01, "{pk:?}");
}

#[test]
fn oracle_reproduces_frozen_peak() {
    let samples = euler(&PAPER, [0.99, 0.01, 0.0, 0.0], 1e-5, 1_000_000, 1);
    let (t, x) = samples
        .iter()
        .copied()
        .fold((0.0, [0.0; 4]), |best, s| if s.1[1] > best.1[1] { s } else { best });
    assert!((x[1] - 0.0574169488539627).abs() < 1e-12);
    assert!((t - 5.03767).abs() < 1e-9);
}

#[test]
fn dt_halving_error_ratio_is_fourth_order() {
    let p = params(&PAPER);
    let x0 = State::new(0.99, 0.01, 0.0, 0.0);
    let run = |dt| integrate(&p, &x0, &IntegrationConfig::new(0.0, 100.0, dt)).unwrap();
    let (coarse, fine, reference) = (run(0.1), run(0.05), run(0.01));
    let err = |traj: &sirsvk::Trajectory, stride: usize| {
        traj.states
            .iter()
            .step_by(stride)
            .zip(reference.states.iter().step_by(10))
            .map(|(a, b)| a.sup_distance(b))
            .fold(0.0, f64::max)
    };
    let ratio = err(&coarse, 1) / err(&fine, 2);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}
