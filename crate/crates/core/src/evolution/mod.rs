//! Time stepping of the radial equation
//! `∂ₜₜv − ∂ᵣᵣv + α∂ₜv + v = v³/r²` for `v = r·u`.
//!
//! Three-level leapfrog with the damping term centred in time:
//!
//! ```text
//! (vⁿ⁺¹ − 2vⁿ + vⁿ⁻¹)/dt² + α(vⁿ⁺¹ − vⁿ⁻¹)/(2dt) = D₂vⁿ − vⁿ + (vⁿ)³/r²
//! ```
//!
//! The stepper always holds one level of lookahead so that the reported
//! velocity `wⁿ = (vⁿ⁺¹ − vⁿ⁻¹)/(2dt)` is centred.

mod run;

pub use run::{run, run_observed, Outcome, RunSeries};

use serde::{Deserialize, Serialize};

use crate::config::DataFamily;
use crate::damping::DampingProfile;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::ground_state::GroundState;
use crate::state::FieldState;

/// `r₀ + T + margin`: the radius the grid must reach so that the outer
/// Dirichlet boundary stays outside the domain of influence.
pub fn required_domain(support: f64, t_final: f64, margin: f64) -> f64 {
    support + t_final + margin
}

/// Samples the initial data of `family` on `grid`.
///
/// `ground` must be a ground state sampled on the same grid when the family
/// is [`DataFamily::ScaledGroundState`].
pub fn init_state(
    family: &DataFamily,
    grid: &RadialGrid,
    ground: Option<&GroundState>,
) -> Result<FieldState> {
    let support = family.support_radius();
    if support > 0.5 * grid.r_max() {
        return Err(Error::validation(
            "initial data",
            format!(
                "effective support {support:.3} exceeds r_max/2 = {}",
                0.5 * grid.r_max()
            ),
        ));
    }
    let state = match *family {
        DataFamily::ScaledGroundState { lambda } => {
            let gs = ground.ok_or_else(|| {
                Error::validation("initial data", "scaled ground state needs a ground state")
            })?;
            if gs.grid != *grid {
                return Err(Error::validation(
                    "initial data",
                    "ground state was computed on a different grid",
                ));
            }
            gs.state(lambda)
        }
        DataFamily::Gaussian { amplitude, sigma } => {
            check_sigma(sigma)?;
            FieldState::from_radial(grid, |r| amplitude * (-(r * r) / (sigma * sigma)).exp(), |_| 0.0)
        }
        DataFamily::VelocityBump { amplitude, sigma } => {
            check_sigma(sigma)?;
            FieldState::from_radial(grid, |_| 0.0, |r| amplitude * (-(r * r) / (sigma * sigma)).exp())
        }
    };
    state.check(grid)?;
    Ok(state)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::validation("initial data", format!("σ must be positive, got {sigma}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepperConfig {
    pub dt: f64,
    /// `M_blow`: sup-norm of `u` treated as blowup.
    pub blowup_threshold: f64,
    pub nonlinear: bool,
}

impl StepperConfig {
    pub fn validate(&self, grid: &RadialGrid) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= grid.dr() * (1.0 + 1e-12)) {
            return Err(Error::validation(
                "dt",
                format!("CFL requires 0 < dt ≤ dr = {}, got {}", grid.dr(), self.dt),
            ));
        }
        if !(self.blowup_threshold >= 10.0) {
            return Err(Error::validation(
                "blowup_threshold",
                format!("must be at least 10, got {}", self.blowup_threshold),
            ));
        }
        Ok(())
    }
}

/// Three-level stepper holding `vⁿ⁻¹`, the current state, and `vⁿ⁺¹`.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    grid: &'a RadialGrid,
    alpha: &'a [f64],
    cfg: StepperConfig,
    prev: Vec<f64>,
    current: FieldState,
    next: Vec<f64>,
    steps: usize,
    scratch: Vec<f64>,
}

impl<'a> Stepper<'a> {
    /// Starts from `initial`; `vⁿ⁺¹` is bootstrapped by the Taylor step
    /// `v¹ = v⁰ + dt·w⁰ + (dt²/2)(D₂v⁰ − v⁰ + (v⁰)³/r² − αw⁰)`.
    pub fn new(
        initial: FieldState,
        grid: &'a RadialGrid,
        damping: &'a DampingProfile,
        cfg: StepperConfig,
    ) -> Result<Self> {
        cfg.validate(grid)?;
        damping.check(grid)?;
        initial.check(grid)?;
        let mut current = initial;
        current.enforce_boundary();
        let mut stepper = Self {
            grid,
            alpha: damping.values(),
            cfg,
            prev: Vec::new(),
            next: vec![0.0; grid.len()],
            steps: 0,
            scratch: vec![0.0; grid.len()],
            current,
        };
        stepper.check_blowup()?;
        let dt = cfg.dt;
        stepper.apply_operator();
        let (v, w) = (&stepper.current.v, &stepper.current.w);
        for i in 1..grid.len() - 1 {
            let accel = stepper.scratch[i] - stepper.alpha[i] * w[i];
            stepper.next[i] = v[i] + dt * w[i] + 0.5 * dt * dt * accel;
        }
        stepper.prev = stepper.current.v.clone();
        Ok(stepper)
    }

    pub fn state(&self) -> &FieldState {
        &self.current
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.cfg.dt
    }

    /// `scratch ← D₂v − v + v³/r²` for the current level.
    fn apply_operator(&mut self) {
        let v = &self.current.v;
        let n = v.len();
        let inv_h2 = 1.0 / (self.grid.dr() * self.grid.dr());
        self.scratch[0] = 0.0;
        self.scratch[n - 1] = 0.0;
        for i in 1..n - 1 {
            let mut a = (v[i + 1] - 2.0 * v[i] + v[i - 1]) * inv_h2 - v[i];
            if self.cfg.nonlinear {
                let r = self.grid.r(i);
                a += v[i] * v[i] * v[i] / (r * r);
            }
            self.scratch[i] = a;
        }
    }

    /// Advances one step and returns the new current state.
    ///
    /// Fails with [`Error::Blowup`] when `sup|u|` exceeds the threshold or the
    /// lookahead level is not finite.
    pub fn step(&mut self) -> Result<&FieldState> {
        let dt = self.cfg.dt;
        // rotate: prev ← vⁿ, current ← vⁿ⁺¹
        std::mem::swap(&mut self.prev, &mut self.current.v);
        std::mem::swap(&mut self.current.v, &mut self.next);
        self.steps += 1;
        self.current.t = self.steps as f64 * dt;

        self.apply_operator();
        let n = self.grid.len();
        let (prev, v) = (&self.prev, &self.current.v);
        for i in 1..n - 1 {
            let half_damp = 0.5 * self.alpha[i] * dt;
            self.next[i] = (2.0 * v[i] - prev[i] + half_damp * prev[i] + dt * dt * self.scratch[i])
                / (1.0 + half_damp);
        }
        self.next[0] = 0.0;
        self.next[n - 1] = 0.0;
        let w = &mut self.current.w;
        for i in 0..n {
            w[i] = (self.next[i] - self.prev[i]) / (2.0 * dt);
        }
        self.current.enforce_boundary();
        self.check_blowup()?;
        Ok(&self.current)
    }

    fn check_blowup(&self) -> Result<()> {
        let t = self.current.t;
        let finite = self.current.v.iter().chain(&self.current.w).all(|x| x.is_finite())
            && self.next.iter().all(|x| x.is_finite());
        if !finite || self.current.sup_u(self.grid) > self.cfg.blowup_threshold {
            return Err(Error::Blowup { t });
        }
        Ok(())
    }
}
