//! Radial damping coefficients α(r).
//!
//! Every damped shape is nonnegative, bounded by `Λ₁`, and stays inside
//! `[Λ₀, Λ₁]` on `r ≥ R`. Transitions use the quintic smoothstep over a width
//! `δ = R/4`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::smooth;

/// Slack allowed when re-checking the bounds on sampled nodes.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DampingShape {
    /// α ≡ Λ₁ everywhere.
    Constant,
    /// α = 0 on `B_{R−δ}`, rises to Λ₀ at R, then to Λ₁ for `r ≥ R+δ`.
    ExteriorPlateau,
    /// Like the plateau up to Λ₀ at R, with a Λ₁ band on `[R+δ, 2R]`
    /// falling back to Λ₀ beyond `2R+δ`.
    ExteriorBand,
    /// α ≡ 0. Undamped control; fails the `Λ₀ ≤ α` bound outside `B_R`.
    Zero,
}

impl DampingShape {
    pub fn name(self) -> &'static str {
        match self {
            DampingShape::Constant => "constant",
            DampingShape::ExteriorPlateau => "exterior-plateau",
            DampingShape::ExteriorBand => "exterior-band",
            DampingShape::Zero => "zero",
        }
    }
}

impl std::str::FromStr for DampingShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(DampingShape::Constant),
            "exterior-plateau" => Ok(DampingShape::ExteriorPlateau),
            "exterior-band" => Ok(DampingShape::ExteriorBand),
            "zero" => Ok(DampingShape::Zero),
            other => Err(Error::validation(
                "damping shape",
                format!("unknown shape `{other}`"),
            )),
        }
    }
}

impl std::fmt::Display for DampingShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampingSpec {
    pub shape: DampingShape,
    pub lambda0: f64,
    pub lambda1: f64,
    pub radius: f64,
}

impl DampingSpec {
    pub fn new(shape: DampingShape, lambda0: f64, lambda1: f64, radius: f64) -> Self {
        Self {
            shape,
            lambda0,
            lambda1,
            radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shape == DampingShape::Zero {
            return Ok(());
        }
        if !(self.lambda0 > 0.0) {
            return Err(Error::validation(
                "damping",
                format!("Λ₀ must be positive, got {}", self.lambda0),
            ));
        }
        if self.lambda0 > self.lambda1 {
            return Err(Error::validation(
                "damping",
                format!("Λ₀ = {} exceeds Λ₁ = {}", self.lambda0, self.lambda1),
            ));
        }
        if !(self.radius > 0.0) || !self.lambda1.is_finite() {
            return Err(Error::validation(
                "damping",
                format!("R must be positive, got {}", self.radius),
            ));
        }
        Ok(())
    }

    /// Transition width of the smooth shapes.
    pub fn rise_width(&self) -> f64 {
        0.25 * self.radius
    }

    /// α at radius `r`.
    pub fn value(&self, r: f64) -> f64 {
        let (l0, l1, big_r) = (self.lambda0, self.lambda1, self.radius);
        let delta = self.rise_width();
        let inner_rise = || l0 * smooth::step((r - (big_r - delta)) / delta);
        match self.shape {
            DampingShape::Zero => 0.0,
            DampingShape::Constant => l1,
            DampingShape::ExteriorPlateau => {
                if r <= big_r {
                    inner_rise()
                } else {
                    l0 + (l1 - l0) * smooth::step((r - big_r) / delta)
                }
            }
            DampingShape::ExteriorBand => {
                if r <= big_r {
                    inner_rise()
                } else {
                    let up = smooth::step((r - big_r) / delta);
                    let down = smooth::step((r - 2.0 * big_r) / delta);
                    l0 + (l1 - l0) * (up - down)
                }
            }
        }
    }
}

/// Sampled damping profile on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DampingProfile {
    spec: DampingSpec,
    alpha: Vec<f64>,
}

impl DampingProfile {
    pub fn new(spec: DampingSpec, grid: &RadialGrid) -> Result<Self> {
        spec.validate()?;
        let profile = Self {
            spec,
            alpha: grid.sample(|r| spec.value(r)),
        };
        profile.check(grid)?;
        Ok(profile)
    }

    /// α ≡ 0 on `grid`.
    pub fn undamped(grid: &RadialGrid) -> Self {
        Self {
            spec: DampingSpec::new(DampingShape::Zero, 0.0, 0.0, 1.0),
            alpha: vec![0.0; grid.len()],
        }
    }

    /// Re-checks the sampled bounds node by node.
    pub fn check(&self, grid: &RadialGrid) -> Result<()> {
        if self.alpha.len() != grid.len() {
            return Err(Error::validation("damping", "profile/grid size mismatch"));
        }
        let spec = &self.spec;
        if spec.shape == DampingShape::Zero {
            return match self.alpha.iter().position(|&a| a != 0.0) {
                Some(i) => Err(Error::validation(
                    "damping",
                    format!("zero profile nonzero at node {i}"),
                )),
                None => Ok(()),
            };
        }
        for (i, &a) in self.alpha.iter().enumerate() {
            if !(a >= -BOUND_SLACK && a <= spec.lambda1 + BOUND_SLACK) {
                return Err(Error::validation(
                    "damping",
                    format!("α = {a} at node {i} outside [0, Λ₁]"),
                ));
            }
            if grid.r(i) >= spec.radius && a < spec.lambda0 - BOUND_SLACK {
                return Err(Error::validation(
                    "damping",
                    format!(
                        "α = {a} below Λ₀ = {} at r = {} ≥ R",
                        spec.lambda0,
                        grid.r(i)
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &DampingSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.alpha
    }

    /// True unless this is the undamped control.
    pub fn satisfies_condition_one(&self) -> bool {
        self.spec.shape != DampingShape::Zero
    }
}

pub fn make_damping(
    shape: DampingShape,
    lambda0: f64,
    lambda1: f64,
    radius: f64,
    grid: &RadialGrid,
) -> Result<DampingProfile> {
    DampingProfile::new(DampingSpec::new(shape, lambda0, lambda1, radius), grid)
}
