use kgdamp::evolution::run_observed;
use kgdamp::*;

fn ground() -> GroundState {
    shoot_ground_state(&RadialGrid::new(20.0, 2001).unwrap(), 1e-10).unwrap()
}

#[test]
fn scaled_ground_states() {
    let gs = ground();
    let g = &gs.grid;
    let over = classify(&gs.state(1.2), gs.h0, g).unwrap();
    assert_eq!(over.label, Label::PsMinus);
    assert!((over.energy_ratio() - 0.8064).abs() < 1e-6);
    let at = classify(&gs.state(1.0), gs.h0, g).unwrap();
    assert_eq!(at.label, Label::NotCovered);
    let under = classify(&gs.state(0.5), gs.h0, g).unwrap();
    assert_eq!(under.label, Label::PsPlus);
    assert!((under.energy_ratio() - 0.4375).abs() < 1e-6);
}

#[test]
fn scaling_map_matches_closed_form() {
    let gs = ground();
    for k in 1..40 {
        let lambda = 0.05 * k as f64;
        if (lambda - 1.0).abs() < 1e-9 {
            continue;
        }
        let l2 = lambda * lambda;
        let ratio = 2.0 * l2 - l2 * l2;
        let expected = if ratio >= 1.0 {
            Label::NotCovered
        } else if l2 <= 1.0 {
            Label::PsPlus
        } else {
            Label::PsMinus
        };
        let c = classify(&gs.state(lambda), gs.h0, &gs.grid).unwrap();
        assert_eq!(c.label, expected, "λ = {lambda}");
        assert!((c.energy_ratio() - ratio).abs() < 1e-6 * ratio.abs().max(1.0), "λ = {lambda}: {} vs {ratio}", c.energy_ratio());
    }
}

/// Labels at the output cadence, with the sample times.
fn labels_along(lambda: f64, t_final: f64) -> (Vec<(f64, Label)>, Outcome) {
    let spec = DampingSpec::new(DampingShape::ExteriorPlateau, 0.5, 1.0, 2.0);
    let config = RunConfig::new(spec, DataFamily::ScaledGroundState { lambda }, t_final);
    let grid = config.grid.build().unwrap();
    let gs = shoot_ground_state(&grid, config.ground_state_tol).unwrap();
    let mut labels = Vec::new();
    let mut k = 0usize;
    let series = run_observed(&config, Some(&gs), |s| {
        if k.is_multiple_of(20) {
            labels.push((s.t, classify(s, gs.h0, &grid)?.label));
        }
        k += 1;
        Ok(())
    })
    .unwrap();
    (labels, series.outcome)
}

#[test]
fn ps_plus_is_invariant_along_the_flow() {
    let (labels, outcome) = labels_along(0.5, 10.0);
    assert!(outcome.is_global());
    assert!(labels.iter().all(|&(_, l)| l == Label::PsPlus));
}

#[test]
fn ps_minus_is_invariant_until_blowup() {
    let (labels, outcome) = labels_along(1.2, 5.0);
    let Outcome::Blowup { t_star, .. } = outcome else {
        panic!("expected blowup");
    };
    // the sample at t* itself is no longer resolved
    let before: Vec<_> = labels.iter().filter(|(t, _)| *t < t_star - 1e-9).collect();
    assert!(before.len() >= 4);
    assert!(before.iter().all(|(_, l)| *l == Label::PsMinus), "{labels:?}");
}
