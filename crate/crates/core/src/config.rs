use serde::{Deserialize, Serialize};

use crate::damping::{DampingProfile, DampingShape, DampingSpec};
use crate::error::{Error, Result};
use crate::evolution::required_domain;
use crate::functionals::AuditRadii;
use crate::grid::RadialGrid;
use crate::ground_state;

/// Relative amplitude below which initial data count as zero when sizing domains.
pub const SUPPORT_FLOOR: f64 = 1e-8;
/// Radius beyond which `Q/Q(0) < SUPPORT_FLOOR`.
pub const GROUND_STATE_SUPPORT: f64 = 17.0;
pub const DEFAULT_DR: f64 = 0.01;
pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e3;
pub const DEFAULT_OUTPUT_INTERVAL: f64 = 0.1;
pub const DEFAULT_MARGIN: f64 = 2.0;

/// Initial data families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DataFamily {
    /// `(λQ, 0)`
    ScaledGroundState { lambda: f64 },
    /// `(a·e^{−r²/σ²}, 0)`
    Gaussian { amplitude: f64, sigma: f64 },
    /// `(0, b·e^{−r²/σ²})`
    VelocityBump { amplitude: f64, sigma: f64 },
}

impl DataFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DataFamily::ScaledGroundState { .. } => "scaled_ground_state",
            DataFamily::Gaussian { .. } => "gaussian",
            DataFamily::VelocityBump { .. } => "velocity_bump",
        }
    }

    /// Radius outside which the data are below `SUPPORT_FLOOR` relative to their peak.
    pub fn support_radius(&self) -> f64 {
        match *self {
            DataFamily::ScaledGroundState { .. } => GROUND_STATE_SUPPORT,
            DataFamily::Gaussian { sigma, .. } | DataFamily::VelocityBump { sigma, .. } => {
                sigma * (-SUPPORT_FLOOR.ln()).sqrt()
            }
        }
    }

    pub fn needs_ground_state(&self) -> bool {
        matches!(self, DataFamily::ScaledGroundState { .. })
    }

    /// Same family with its amplitude parameter replaced.
    pub fn with_amplitude(&self, a: f64) -> Self {
        match *self {
            DataFamily::ScaledGroundState { .. } => DataFamily::ScaledGroundState { lambda: a },
            DataFamily::Gaussian { sigma, .. } => DataFamily::Gaussian { amplitude: a, sigma },
            DataFamily::VelocityBump { sigma, .. } => DataFamily::VelocityBump { amplitude: a, sigma },
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            DataFamily::ScaledGroundState { lambda } => lambda,
            DataFamily::Gaussian { amplitude, .. } | DataFamily::VelocityBump { amplitude, .. } => {
                amplitude
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.r_max, self.n)
    }

    pub fn dr(&self) -> f64 {
        self.r_max / (self.n.max(2) - 1) as f64
    }

    /// Grid covering at least `r_max` with spacing `dr`.
    pub fn covering(r_max: f64, dr: f64) -> Self {
        let cells = (r_max / dr - 1e-9).ceil().max(15.0) as usize;
        Self {
            r_max: cells as f64 * dr,
            n: cells + 1,
        }
    }

    /// Same extent, spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            r_max: self.r_max,
            n: 2 * (self.n - 1) + 1,
        }
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub damping: DampingSpec,
    pub data: DataFamily,
    pub dt: f64,
    pub t_final: f64,
    pub blowup_threshold: f64,
    /// Time between recorded samples; rounded to a whole number of steps.
    pub output_interval: f64,
    pub radii: AuditRadii,
    pub nonlinear: bool,
    pub ground_state_tol: f64,
}

impl RunConfig {
    /// Config with every default filled in: the grid sized by
    /// [`required_domain`] at spacing 0.01, `dt = dr/2`, `M_blow = 10³`,
    /// samples every 0.1, `r₁ = 3R/2`, `r₂ = 5R/2`.
    pub fn new(damping: DampingSpec, data: DataFamily, t_final: f64) -> Self {
        let support = data.support_radius();
        let mut extent = required_domain(support, t_final, DEFAULT_MARGIN).max(2.0 * support);
        if data.needs_ground_state() {
            extent = extent.max(ground_state::MIN_RADIUS);
        }
        let grid = GridSpec::covering(extent, DEFAULT_DR);
        Self {
            dt: 0.5 * grid.dr(),
            grid,
            damping,
            data,
            t_final,
            blowup_threshold: DEFAULT_BLOWUP_THRESHOLD,
            output_interval: DEFAULT_OUTPUT_INTERVAL,
            radii: AuditRadii::from_radius(damping.radius),
            nonlinear: true,
            ground_state_tol: ground_state::DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid.build()?;
        self.damping.validate()?;
        if !(self.dt > 0.0) {
            return Err(Error::validation("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.dt > grid.dr() * (1.0 + 1e-12) {
            return Err(Error::validation(
                "dt",
                format!("CFL violated: dt = {} > dr = {}", self.dt, grid.dr()),
            ));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::validation("t_final", format!("must be positive, got {}", self.t_final)));
        }
        if !(self.blowup_threshold >= 10.0) {
            return Err(Error::validation(
                "blowup_threshold",
                format!("must be at least 10, got {}", self.blowup_threshold),
            ));
        }
        if !(self.output_interval > 0.0) {
            return Err(Error::validation("output_interval", "must be positive"));
        }
        let support = self.data.support_radius();
        if self.t_final > grid.r_max() - support {
            return Err(Error::validation(
                "domain",
                format!(
                    "T = {} exceeds r_max − support = {} − {:.3}; need r_max ≥ {:.3}",
                    self.t_final,
                    grid.r_max(),
                    support,
                    required_domain(support, self.t_final, 0.0)
                ),
            ));
        }
        if support > 0.5 * grid.r_max() {
            return Err(Error::validation(
                "domain",
                format!("data support {support:.3} wider than r_max/2"),
            ));
        }
        let r = &self.radii;
        if !(r.radius > 0.0 && r.r1 > 0.0 && r.r1 < r.r2 && r.r2 <= grid.r_max()) {
            return Err(Error::validation("radii", format!("{r:?}")));
        }
        Ok(())
    }

    /// `α` on `grid`; the undamped control bypasses the bound checks.
    pub fn damping_profile(&self, grid: &RadialGrid) -> Result<DampingProfile> {
        if self.damping.shape == DampingShape::Zero {
            Ok(DampingProfile::undamped(grid))
        } else {
            DampingProfile::new(self.damping, grid)
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    pub fn output_stride(&self) -> usize {
        ((self.output_interval / self.dt).round() as usize).max(1)
    }

    /// Same run with `dt` and `dr` both halved.
    pub fn refined(&self) -> Self {
        let mut c = self.clone();
        c.grid = self.grid.refined();
        c.dt = 0.5 * self.dt;
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn damping() -> DampingSpec {
        DampingSpec::new(DampingShape::Constant, 1.0, 1.0, 2.0)
    }

    #[test]
    fn defaults_satisfy_validation() {
        let c = RunConfig::new(damping(), DataFamily::Gaussian { amplitude: 0.05, sigma: 1.0 }, 20.0);
        c.validate().unwrap();
        assert!((c.dt - 0.005).abs() < 1e-12);
        assert_eq!(c.output_stride(), 20);
        assert!(c.grid.r_max >= 20.0 + c.data.support_radius());
    }

    #[test]
    fn cfl_violation() {
        let mut c = RunConfig::new(damping(), DataFamily::Gaussian { amplitude: 0.05, sigma: 1.0 }, 5.0);
        c.dt = 2.0 * c.grid.dr();
        let err = c.validate().unwrap_err();
        assert!(err.to_string().contains("CFL"));
    }

    #[test]
    fn domain_too_small() {
        let mut c = RunConfig::new(damping(), DataFamily::Gaussian { amplitude: 0.05, sigma: 1.0 }, 5.0);
        c.t_final = 50.0;
        assert!(c.validate().unwrap_err().to_string().contains("domain"));
    }

    #[test]
    fn ground_state_runs_get_room_for_the_tail() {
        let c = RunConfig::new(damping(), DataFamily::ScaledGroundState { lambda: 0.5 }, 5.0);
        c.validate().unwrap();
        assert!(c.grid.r_max >= 2.0 * GROUND_STATE_SUPPORT);
    }
}
