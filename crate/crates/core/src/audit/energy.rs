use serde::{Deserialize, Serialize};

use crate::evolution::RunSeries;

/// `E(tₖ) − E(0) + A[0, tₖ]` along a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyResidual {
    pub times: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `max |residual| / E(0)`; 0 when everything vanishes.
    pub max_relative: f64,
    /// true when the run blew up and the residual stops at `t*`
    pub partial: bool,
}

pub fn energy_identity_residual(series: &RunSeries) -> EnergyResidual {
    let e0 = series.records.first().map_or(0.0, |r| r.energy);
    let residuals: Vec<f64> = series
        .records
        .iter()
        .zip(&series.decrement)
        .map(|(r, a)| r.energy - e0 + a)
        .collect();
    let worst = residuals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let max_relative = if worst == 0.0 {
        0.0
    } else if e0 > 0.0 {
        worst / e0
    } else {
        f64::INFINITY
    };
    EnergyResidual {
        times: series.times().collect(),
        residuals,
        max_relative,
        partial: !series.outcome.is_global(),
    }
}
