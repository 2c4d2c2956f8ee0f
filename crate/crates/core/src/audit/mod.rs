//! Numerical audits of the energy balance, the multiplier identities, the
//! Morawetz-type estimates, the observation inequalities and exponential decay.
//!
//! Nothing here compares against the symbolic constants of the estimates;
//! every constant is measured from a run and reported.

mod decay;
mod energy;
mod morawetz;
mod multiplier;
mod observation;
mod trace;

pub use decay::{fit_decay, fit_exponential, DecayFit, DEFAULT_WINDOW_START};
pub use energy::{energy_identity_residual, EnergyResidual};
pub use morawetz::{morawetz_report, Estimate, MorawetzReport};
pub use multiplier::{
    multiplier_ledger, multiplier_terms, psi_identity_residual, MultiplierAccumulator,
    MultiplierLedger, PsiAccumulator, PsiResidual,
};
pub use observation::{observation_report, ObservationEntry, ObservationReport, Ratio};
pub use trace::{collect_dense_trace, DenseTrace};

/// Relative tolerance for quantities that vanish up to quadrature error,
/// measured against the sum of the magnitudes of the terms involved.
pub const QUADRATURE_TOL: f64 = 1e-4;

/// Trapezoid rule over (possibly non-uniform) samples.
pub(crate) fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::trapezoid;

    #[test]
    fn trapezoid_is_exact_for_lines() {
        let t = [0.0, 0.5, 1.5, 2.0];
        let v: Vec<f64> = t.iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((trapezoid(&t, &v) - 8.0).abs() < 1e-14);
    }
}
