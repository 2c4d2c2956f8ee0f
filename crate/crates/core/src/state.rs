use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::grid::RadialGrid;

/// Field at one instant in the `v = r·u`, `w = r·∂ₜu` representation.
///
/// Both sequences vanish at the origin and at `r_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub t: f64,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl FieldState {
    pub fn zero(grid: &RadialGrid) -> Self {
        Self {
            t: 0.0,
            v: vec![0.0; grid.len()],
            w: vec![0.0; grid.len()],
        }
    }

    /// Samples `u₀` and `u₁` on the grid and enforces the endpoint constraints.
    pub fn from_radial(
        grid: &RadialGrid,
        u0: impl Fn(f64) -> f64,
        u1: impl Fn(f64) -> f64,
    ) -> Self {
        let mut state = Self {
            t: 0.0,
            v: grid.sample(|r| r * u0(r)),
            w: grid.sample(|r| r * u1(r)),
        };
        state.enforce_boundary();
        state
    }

    /// Builds a state from node values of `u` and `∂ₜu`.
    pub fn from_nodal(grid: &RadialGrid, u: &[f64], ut: &[f64]) -> Result<Self> {
        if u.len() != grid.len() || ut.len() != grid.len() {
            return Err(Error::validation("field", "length does not match grid"));
        }
        let mut state = Self {
            t: 0.0,
            v: grid.nodes().zip(u).map(|(r, x)| r * x).collect(),
            w: grid.nodes().zip(ut).map(|(r, x)| r * x).collect(),
        };
        state.enforce_boundary();
        Ok(state)
    }

    pub fn enforce_boundary(&mut self) {
        let last = self.v.len() - 1;
        self.v[0] = 0.0;
        self.w[0] = 0.0;
        self.v[last] = 0.0;
        self.w[last] = 0.0;
    }

    pub fn check(&self, grid: &RadialGrid) -> Result<()> {
        if self.v.len() != grid.len() || self.w.len() != grid.len() {
            return Err(Error::validation("field", "length does not match grid"));
        }
        check_finite("v", &self.v)?;
        check_finite("w", &self.w)
    }

    /// `u` at the nodes.
    pub fn u(&self, grid: &RadialGrid) -> Vec<f64> {
        divide_by_radius(grid, &self.v)
    }

    /// `∂ₜu` at the nodes.
    pub fn ut(&self, grid: &RadialGrid) -> Vec<f64> {
        divide_by_radius(grid, &self.w)
    }

    pub fn sup_u(&self, grid: &RadialGrid) -> f64 {
        self.u(grid).iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().chain(&self.w).all(|&x| x == 0.0)
    }

    /// Same state with `u` multiplied by `lambda` and `∂ₜu` left alone.
    pub fn scaled_u(&self, lambda: f64) -> Self {
        Self {
            t: self.t,
            v: self.v.iter().map(|x| lambda * x).collect(),
            w: self.w.clone(),
        }
    }
}

/// `f/r` with the origin filled by the even extrapolation `(4f₁ − f₂)/3`.
pub(crate) fn divide_by_radius(grid: &RadialGrid, f: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(f.len());
    out.push(0.0);
    for i in 1..f.len() {
        out.push(f[i] / grid.r(i));
    }
    out[0] = (4.0 * out[1] - out[2]) / 3.0;
    out
}
