use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::evolution::{run_observed, RunSeries};
use crate::ground_state::GroundState;
use crate::state::FieldState;

/// Full states of a run at a fixed stride of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTrace {
    /// time step of the run
    pub dt: f64,
    /// steps between stored states; space-time audits need 1
    pub stride: usize,
    pub states: Vec<FieldState>,
}

impl DenseTrace {
    /// A trace whose states all equal `state`, spaced by `dt` over `[0, t_final]`.
    pub fn stationary(state: &FieldState, dt: f64, t_final: f64) -> Self {
        let steps = (t_final / dt).round() as usize;
        let states = (0..=steps)
            .map(|k| FieldState {
                t: k as f64 * dt,
                ..state.clone()
            })
            .collect();
        Self {
            dt,
            stride: 1,
            states,
        }
    }

    pub fn require_dense(&self) -> Result<()> {
        if self.stride != 1 {
            return Err(Error::validation(
                "trace",
                format!(
                    "stride {} is too sparse for space-time audits; record every step (dense cadence)",
                    self.stride
                ),
            ));
        }
        if self.states.len() < 2 {
            return Err(Error::validation("trace", "need at least two states"));
        }
        Ok(())
    }
}

/// Runs `config` and keeps every step's state.
pub fn collect_dense_trace(
    config: &RunConfig,
    ground: Option<&GroundState>,
) -> Result<(RunSeries, DenseTrace)> {
    let mut states = Vec::with_capacity(config.steps() + 1);
    let series = run_observed(config, ground, |s| {
        states.push(s.clone());
        Ok(())
    })?;
    Ok((
        series,
        DenseTrace {
            dt: config.dt,
            stride: 1,
            states,
        },
    ))
}
