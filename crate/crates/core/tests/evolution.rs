use std::f64::consts::PI;

use kgdamp::audit::energy_identity_residual;
use kgdamp::*;

fn constant_damping(grid: &RadialGrid) -> DampingProfile {
    DampingProfile::new(DampingSpec::new(DampingShape::Constant, 1.0, 1.0, 2.0), grid).unwrap()
}

fn linear(dt: f64) -> StepperConfig {
    StepperConfig {
        dt,
        blowup_threshold: 1e3,
        nonlinear: false,
    }
}

/// Max deviation of the sine mode from `e^{−t/2}(cos νt + sin νt/(2ν))` over one period.
fn sine_mode_error(dt: f64) -> f64 {
    let grid = RadialGrid::new(10.0, 1001).unwrap();
    let damping = constant_damping(&grid);
    let k = 3.0;
    let theta = k * PI / grid.r_max();
    let v0 = grid.sample(|r| (theta * r).sin());
    let initial = FieldState {
        t: 0.0,
        v: v0.clone(),
        w: vec![0.0; grid.len()],
    };
    // eigenvalue of the discrete Laplacian on this mode
    let h = grid.dr();
    let kappa2 = (2.0 / h * (0.5 * theta * h).sin()).powi(2);
    let nu = (kappa2 + 0.75).sqrt();
    let steps = (2.0 * PI / nu / dt).round() as usize;
    let mut stepper = Stepper::new(initial, &grid, &damping, linear(dt)).unwrap();
    let probe = grid.nearest(2.5);
    let mut worst = 0.0f64;
    for _ in 0..steps {
        let s = stepper.step().unwrap();
        let t = s.t;
        let q = (-0.5 * t).exp() * ((nu * t).cos() + (nu * t).sin() / (2.0 * nu));
        worst = worst.max((s.v[probe] / v0[probe] - q).abs());
    }
    worst
}

#[test]
fn sine_mode_follows_the_mode_equation() {
    let coarse = sine_mode_error(0.005);
    let fine = sine_mode_error(0.0025);
    assert!(coarse < 1e-4, "error {coarse}");
    let ratio = coarse / fine;
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

fn terminal_state(dt: f64) -> Vec<f64> {
    let grid = RadialGrid::new(20.0, 1001).unwrap();
    let damping = DampingProfile::new(
        DampingSpec::new(DampingShape::ExteriorPlateau, 0.5, 1.0, 2.0),
        &grid,
    )
    .unwrap();
    let initial = FieldState::from_radial(&grid, |r| 0.5 * (-r * r).exp(), |_| 0.0);
    let cfg = StepperConfig {
        dt,
        blowup_threshold: 1e3,
        nonlinear: true,
    };
    let mut stepper = Stepper::new(initial, &grid, &damping, cfg).unwrap();
    let steps = (4.0 / dt).round() as usize;
    for _ in 0..steps {
        stepper.step().unwrap();
    }
    stepper.state().v.clone()
}

#[test]
fn halving_dt_is_second_order() {
    let a = terminal_state(0.01);
    let b = terminal_state(0.005);
    let c = terminal_state(0.0025);
    let diff = |x: &[f64], y: &[f64]| x.iter().zip(y).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    let ratio = diff(&a, &b) / diff(&b, &c);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

/// Largest `|u|` outside `r₀ + t + margin` at every hundredth step up to `T = 5`.
fn leak_outside_cone(dt_over_dr: f64, margin: f64) -> f64 {
    let grid = RadialGrid::new(20.0, 2001).unwrap();
    let damping = constant_damping(&grid);
    let r0 = 2.0;
    let bump = move |r: f64| {
        if r < r0 {
            0.3 * (1.0 - 1.0 / (1.0 - (r / r0).powi(2))).exp()
        } else {
            0.0
        }
    };
    let initial = FieldState::from_radial(&grid, bump, |_| 0.0);
    let cfg = StepperConfig {
        dt: dt_over_dr * grid.dr(),
        blowup_threshold: 1e3,
        nonlinear: true,
    };
    let mut stepper = Stepper::new(initial, &grid, &damping, cfg).unwrap();
    let steps = (5.0 / cfg.dt).round() as usize;
    let mut worst = 0.0f64;
    for k in 1..=steps {
        let s = stepper.step().unwrap();
        if k % 100 != 0 {
            continue;
        }
        let front = r0 + s.t + margin;
        let outside = (1..grid.len())
            .filter(|&i| grid.r(i) > front)
            .fold(0.0f64, |m, i| m.max((s.v[i] / grid.r(i)).abs()));
        worst = worst.max(outside);
    }
    worst
}

#[test]
fn finite_speed_at_unit_courant_number() {
    // with dt = dr the stencil's domain of dependence is the light cone itself
    assert!(leak_outside_cone(1.0, 0.02) <= 1e-10);
}

#[test]
fn finite_speed_at_default_step() {
    // at dt = dr/2 the discrete front has a transition zone a few nodes wide
    assert!(leak_outside_cone(0.5, 0.25) <= 1e-10);
}

fn gaussian_run(shape: DampingShape, t_final: f64) -> RunConfig {
    RunConfig::new(
        DampingSpec::new(shape, 0.5, 1.0, 2.0),
        DataFamily::Gaussian { amplitude: 0.05, sigma: 1.0 },
        t_final,
    )
}

#[test]
fn undamped_energy_is_conserved() {
    let series = run(&gaussian_run(DampingShape::Zero, 10.0), None).unwrap();
    assert!(series.outcome.is_global());
    assert!(series.decrement.iter().all(|&a| a == 0.0));
    let e0 = series.records[0].energy;
    let drift = series.energies().fold(0.0f64, |m, e| m.max((e - e0).abs()));
    assert!(drift <= 1e-4 * e0, "drift {drift:e}");
    assert!(energy_identity_residual(&series).max_relative <= 1e-4);
}

#[test]
fn zero_data_stay_zero() {
    let mut config = gaussian_run(DampingShape::Constant, 2.0);
    config.data = DataFamily::Gaussian { amplitude: 0.0, sigma: 1.0 };
    let series = run(&config, None).unwrap();
    assert!(series.outcome.is_global());
    for r in &series.records {
        assert_eq!(r.energy, 0.0);
        assert_eq!(r.linear_energy, 0.0);
        assert_eq!(r.nehari, 0.0);
        assert_eq!(r.action, 0.0);
    }
}

#[test]
fn damped_small_data_decay_monotonically() {
    for shape in [DampingShape::Constant, DampingShape::ExteriorPlateau] {
        let series = run(&gaussian_run(shape, 10.0), None).unwrap();
        assert!(series.outcome.is_global());
        let e0 = series.records[0].energy;
        assert!(series.records[0].linear_energy <= 1e-2);
        for w in series.records.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-8 * e0);
        }
        for r in &series.records {
            assert!(r.linear_energy <= 2.0 * r.energy + 1e-8 * e0);
        }
    }
}

#[test]
fn samples_land_on_the_output_cadence() {
    let series = run(&gaussian_run(DampingShape::Constant, 3.0), None).unwrap();
    assert_eq!(series.len(), 31);
    for (k, t) in series.times().enumerate() {
        assert!((t - 0.1 * k as f64).abs() < 1e-9);
    }
    assert_eq!(series.sample_at(1.5), Some(15));
}

#[test]
fn ground_state_data_sampled_on_its_own_grid() {
    let spec = DampingSpec::new(DampingShape::ExteriorPlateau, 0.5, 1.0, 2.0);
    let config = RunConfig::new(spec, DataFamily::ScaledGroundState { lambda: 1.0 }, 1.0);
    let grid = config.grid.build().unwrap();
    let gs = shoot_ground_state(&grid, config.ground_state_tol).unwrap();
    let state = evolution::init_state(&config.data, &grid, Some(&gs)).unwrap();
    let c = classify(&state, gs.h0, &grid).unwrap();
    assert!((c.energy - gs.h0).abs() <= 1e-6 * gs.h0);
    // a ground state from another grid is refused
    let other = shoot_ground_state(&RadialGrid::new(20.0, 2001).unwrap(), 1e-10).unwrap();
    assert!(evolution::init_state(&config.data, &grid, Some(&other)).is_err());
    assert!(run(&config, None).is_err());
}

#[test]
fn blowup_time_is_stable() {
    let spec = DampingSpec::new(DampingShape::ExteriorPlateau, 0.5, 1.0, 2.0);
    let base = RunConfig::new(spec, DataFamily::ScaledGroundState { lambda: 1.2 }, 5.0);
    let t_star = |c: &RunConfig| {
        let gs = shoot_ground_state(&c.grid.build().unwrap(), c.ground_state_tol).unwrap();
        match run(c, Some(&gs)).unwrap().outcome {
            Outcome::Blowup { t_star, detected_at } => {
                assert!(detected_at >= t_star);
                t_star
            }
            Outcome::Global => panic!("no blowup"),
        }
    };
    let reference = t_star(&base);
    let mut higher = base.clone();
    higher.blowup_threshold = 1e4;
    for other in [t_star(&base.refined()), t_star(&higher)] {
        assert!((other - reference).abs() <= base.output_interval + 1e-9);
    }
}
