use serde::{Deserialize, Serialize};

use super::{init_state, Stepper, StepperConfig};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::functionals::{evaluate_functionals, AuditRadii, FunctionalRecord};
use crate::grid::RadialGrid;
use crate::ground_state::GroundState;
use crate::state::FieldState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Global,
    /// `t_star` is the time of the last sample recorded before detection.
    Blowup { t_star: f64, detected_at: f64 },
}

impl Outcome {
    pub fn is_global(&self) -> bool {
        matches!(self, Outcome::Global)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Global => "global",
            Outcome::Blowup { .. } => "blowup",
        }
    }
}

/// Sampled functionals of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSeries {
    pub records: Vec<FunctionalRecord>,
    /// cumulative `A[0, tₖ]` at each sample
    pub decrement: Vec<f64>,
    pub outcome: Outcome,
    pub dt: f64,
    pub radii: AuditRadii,
}

impl RunSeries {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.t)
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.energy)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `E_L` of the initial data.
    pub fn initial_linear_energy(&self) -> f64 {
        self.records.first().map_or(0.0, |r| r.linear_energy)
    }

    /// Index of the sample at time `t` (within half a step).
    pub fn sample_at(&self, t: f64) -> Option<usize> {
        self.records
            .iter()
            .position(|r| (r.t - t).abs() <= 0.5 * self.dt)
    }
}

/// `∫α|∂ₜu|² dx = 4π∫ α w² dr`, trapezoid.
fn damping_rate(alpha: &[f64], w: &[f64], dr: f64) -> f64 {
    let n = w.len();
    let mut sum = 0.0;
    for i in 0..n {
        let weight = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        sum += weight * alpha[i] * w[i] * w[i];
    }
    4.0 * std::f64::consts::PI * sum * dr
}

/// Runs `config` to `T` or blowup.
pub fn run(config: &RunConfig, ground: Option<&GroundState>) -> Result<RunSeries> {
    run_observed(config, ground, |_| Ok(()))
}

/// Like [`run`], also handing every step's state (including the initial
/// one) to `observer` in time order.
pub fn run_observed(
    config: &RunConfig,
    ground: Option<&GroundState>,
    mut observer: impl FnMut(&FieldState) -> Result<()>,
) -> Result<RunSeries> {
    config.validate()?;
    let grid: RadialGrid = config.grid.build()?;
    let damping = config.damping_profile(&grid)?;
    let initial = init_state(&config.data, &grid, ground)?;
    let stepper_cfg = StepperConfig {
        dt: config.dt,
        blowup_threshold: config.blowup_threshold,
        nonlinear: config.nonlinear,
    };
    let alpha = damping.values();
    let record = |state: &FieldState, step: usize| {
        evaluate_functionals(state, alpha, &grid, &config.radii).map_err(|e| e.at_step(step))
    };

    let mut stepper = Stepper::new(initial, &grid, &damping, stepper_cfg)?;
    let mut series = RunSeries {
        records: vec![record(stepper.state(), 0)?],
        decrement: vec![0.0],
        outcome: Outcome::Global,
        dt: config.dt,
        radii: config.radii,
    };
    observer(stepper.state()).map_err(|e| e.at_step(0))?;

    let (steps, stride) = (config.steps(), config.output_stride());
    let mut rate = damping_rate(alpha, &stepper.state().w, grid.dr());
    let mut decrement = 0.0;
    for k in 1..=steps {
        match stepper.step() {
            Ok(state) => {
                let next_rate = damping_rate(alpha, &state.w, grid.dr());
                decrement += 0.5 * config.dt * (rate + next_rate);
                rate = next_rate;
                observer(state).map_err(|e| e.at_step(k))?;
                if k % stride == 0 || k == steps {
                    series.records.push(record(state, k)?);
                    series.decrement.push(decrement);
                }
            }
            Err(Error::Blowup { t }) => {
                let t_star = series.records.last().map_or(0.0, |r| r.t);
                series.outcome = Outcome::Blowup {
                    t_star,
                    detected_at: t,
                };
                break;
            }
            Err(e) => return Err(e.at_step(k)),
        }
    }
    Ok(series)
}
