use serde::{Deserialize, Serialize};

use super::trapezoid;
use crate::error::{Error, Result};
use crate::evolution::RunSeries;
use crate::functionals::Ball;

/// A quotient `E/D` with its division-by-zero cases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Ratio {
    Finite(f64),
    /// `D = 0 < E`
    Unbounded,
    /// `D = 0 = E`
    Degenerate,
}

impl Ratio {
    pub fn of(numerator: f64, denominator: f64) -> Self {
        if denominator > 0.0 {
            Ratio::Finite(numerator / denominator)
        } else if numerator > 0.0 {
            Ratio::Unbounded
        } else {
            Ratio::Degenerate
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ratio::Finite(_) => "finite",
            Ratio::Unbounded => "unbounded",
            Ratio::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationEntry {
    pub t: f64,
    pub energy: f64,
    pub decrement: f64,
    /// `∫₀ᵀ ∫_{|x|≤4R} u²`
    pub local_l2: f64,
    /// `E(T)/A[0,T]`
    pub strong: Ratio,
    /// `E(T)/(A[0,T] + ∫₀ᵀ‖u‖²_{L²(|x|≤4R)})`
    pub weak: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationReport {
    pub entries: Vec<ObservationEntry>,
}

impl ObservationReport {
    /// Largest finite strong ratio, `None` if any entry is not finite.
    pub fn max_strong(&self) -> Option<f64> {
        self.entries
            .iter()
            .map(|e| e.strong.value())
            .try_fold(0.0f64, |m, x| x.map(|x| m.max(x)))
    }

    pub fn any_unbounded(&self) -> bool {
        self.entries.iter().any(|e| e.strong == Ratio::Unbounded)
    }
}

/// Evaluates both ratios at each requested time, which must be sample times.
pub fn observation_report(series: &RunSeries, times: &[f64]) -> Result<ObservationReport> {
    if !series.outcome.is_global() {
        return Err(Error::validation("observation", "run blew up"));
    }
    let ts: Vec<f64> = series.times().collect();
    let local: Vec<f64> = series
        .records
        .iter()
        .map(|r| r.ball(Ball::FourR).u2_inside)
        .collect();
    let mut entries = Vec::with_capacity(times.len());
    for &t in times {
        let k = series.sample_at(t).ok_or_else(|| {
            Error::validation("observation", format!("no sample at t = {t}"))
        })?;
        let energy = series.records[k].energy;
        let decrement = series.decrement[k];
        let local_l2 = trapezoid(&ts[..=k], &local[..=k]);
        entries.push(ObservationEntry {
            t: ts[k],
            energy,
            decrement,
            local_l2,
            strong: Ratio::of(energy, decrement),
            weak: Ratio::of(energy, decrement + local_l2),
        });
    }
    Ok(ObservationReport { entries })
}

#[cfg(test)]
mod tests {
    use super::Ratio;

    #[test]
    fn ratio_cases() {
        assert_eq!(Ratio::of(1.0, 2.0), Ratio::Finite(0.5));
        assert_eq!(Ratio::of(1.0, 0.0), Ratio::Unbounded);
        assert_eq!(Ratio::of(0.0, 0.0), Ratio::Degenerate);
        assert_eq!(Ratio::Unbounded.value(), None);
    }
}
