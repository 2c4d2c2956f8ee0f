use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::RunSeries;

/// Default start of the fit window, past the initial transient.
pub const DEFAULT_WINDOW_START: f64 = 5.0;

/// Least-squares fit `log E ≈ log c − λt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub t_start: f64,
    pub t_end: f64,
    pub rate: f64,
    pub coefficient: f64,
    /// `None` when `log E` is constant on the window
    pub r_squared: Option<f64>,
    pub samples: usize,
}

/// Fits `values` on the samples with `times` in `[t_start, t_end]`.
pub fn fit_exponential(times: &[f64], values: &[f64], t_start: f64, t_end: f64) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(Error::validation("decay fit", "times and values differ in length"));
    }
    if !(t_start < t_end) {
        return Err(Error::validation(
            "decay fit",
            format!("window [{t_start}, {t_end}] is empty"),
        ));
    }
    let slack = 1e-9 * t_end.abs().max(1.0);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &e) in times.iter().zip(values) {
        if t < t_start - slack || t > t_end + slack {
            continue;
        }
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::validation(
                "decay fit",
                format!("energy {e} at t = {t} is not positive"),
            ));
        }
        xs.push(t);
        ys.push(e.ln());
    }
    let m = xs.len();
    if m < 3 {
        return Err(Error::validation(
            "decay fit",
            format!("window [{t_start}, {t_end}] holds {m} samples, need 3"),
        ));
    }
    let mf = m as f64;
    let xbar = xs.iter().sum::<f64>() / mf;
    let ybar = ys.iter().sum::<f64>() / mf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - xbar, y - ybar);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let r_squared = if syy <= 1e-26 * mf * ybar.abs().max(1.0).powi(2) {
        None
    } else {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        Some((1.0 - ss_res / syy).clamp(0.0, 1.0))
    };
    let rate = if r_squared.is_none() { 0.0 } else { -slope };
    Ok(DecayFit {
        t_start: xs[0],
        t_end: xs[m - 1],
        rate,
        coefficient: intercept.exp(),
        r_squared,
        samples: m,
    })
}

/// Fits `E(t)` of a global run on `[t_start, T]`.
pub fn fit_decay(series: &RunSeries, t_start: f64) -> Result<DecayFit> {
    if !series.outcome.is_global() {
        return Err(Error::validation("decay fit", "run blew up"));
    }
    let times: Vec<f64> = series.times().collect();
    let energies: Vec<f64> = series.energies().collect();
    let t_end = *times
        .last()
        .ok_or_else(|| Error::validation("decay fit", "empty series"))?;
    fit_exponential(&times, &energies, t_start, t_end)
}
