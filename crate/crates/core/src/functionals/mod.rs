//! Radial quadrature of the energy-type functionals.
//!
//! Volume integrals use `∫_{ℝ³} f dx = 4π ∫ f(r) r² dr`, evaluated by
//! integrating the piecewise-linear interpolant of `f·r²` (trapezoid rule,
//! exact on sub-cells so that region splits are additive).

mod cutoff;

pub use cutoff::{build_cutoff, Cutoff, CutoffConstants, CutoffKind};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::state::FieldState;

const FOUR_PI: f64 = 4.0 * PI;

/// Radial interval `[lo, hi]`, clipped to the grid when integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
}

impl Region {
    pub const ALL: Region = Region {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    pub fn ball(radius: f64) -> Self {
        Region { lo: 0.0, hi: radius }
    }

    pub fn outside(radius: f64) -> Self {
        Region {
            lo: radius,
            hi: f64::INFINITY,
        }
    }

    pub fn shell(inner: f64, outer: f64) -> Self {
        Region {
            lo: inner,
            hi: outer,
        }
    }
}

/// `4π ∫_region f(r) r² dr` by the trapezoid rule on the grid.
pub fn integrate_radial(f: &[f64], grid: &RadialGrid, region: Region) -> Result<f64> {
    if f.len() != grid.len() {
        return Err(Error::validation("integrand", "length does not match grid"));
    }
    let (lo, hi) = clip(region, grid)?;
    let (i_lo, i_hi) = (cell_of(lo, grid), cell_of(hi, grid));
    if let Some(k) = f[i_lo..=i_hi + 1].iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            field: "integrand",
            node: i_lo + k,
        });
    }
    let g: Vec<f64> = (i_lo..=i_hi + 1)
        .map(|i| f[i] * grid.r(i) * grid.r(i))
        .collect();
    let offset = i_lo;
    let weighted = |i: usize| g[i - offset];
    Ok(FOUR_PI * piecewise_linear(&weighted, grid, lo, hi))
}

fn clip(region: Region, grid: &RadialGrid) -> Result<(f64, f64)> {
    let lo = region.lo.max(0.0);
    let hi = region.hi.min(grid.r_max());
    if region.lo.is_nan() || region.hi.is_nan() || lo > hi {
        return Err(Error::validation(
            "region",
            format!("[{}, {}] is empty or out of order", region.lo, region.hi),
        ));
    }
    Ok((lo, hi))
}

/// Index `i` of the cell `[r_i, r_{i+1}]` containing `r`, at most `n − 2`.
fn cell_of(r: f64, grid: &RadialGrid) -> usize {
    ((r / grid.dr()).floor().max(0.0) as usize).min(grid.len() - 2)
}

/// Exact integral over `[lo, hi]` of the linear interpolant of nodal `g`.
fn piecewise_linear(g: &impl Fn(usize) -> f64, grid: &RadialGrid, lo: f64, hi: f64) -> f64 {
    let dr = grid.dr();
    let (ia, ib) = (cell_of(lo, grid), cell_of(hi, grid));
    let interp = |i: usize, r: f64| {
        let s = (r - grid.r(i)) / dr;
        g(i) + (g(i + 1) - g(i)) * s
    };
    let (ga, gb) = (interp(ia, lo), interp(ib, hi));
    if ia == ib {
        return 0.5 * (hi - lo) * (ga + gb);
    }
    let mut sum = 0.5 * (grid.r(ia + 1) - lo) * (ga + g(ia + 1));
    for i in ia + 1..ib {
        sum += 0.5 * dr * (g(i) + g(i + 1));
    }
    sum + 0.5 * (hi - grid.r(ib)) * (g(ib) + gb)
}

/// Nodal `u`, `∂ᵣu`, `∂ₜu` recovered from a state.
#[derive(Debug, Clone)]
pub(crate) struct NodalFields {
    pub u: Vec<f64>,
    pub ur: Vec<f64>,
    pub ut: Vec<f64>,
}

impl NodalFields {
    pub fn new(state: &FieldState, grid: &RadialGrid) -> Self {
        Self {
            u: state.u(grid),
            ur: radial_derivative_of_u(&state.v, grid),
            ut: state.ut(grid),
        }
    }
}

/// `∂ᵣu = (∂ᵣv − v/r)/r` with fourth-order differences for `∂ᵣv`.
///
/// `v` is continued oddly through both endpoints, where it vanishes.
pub(crate) fn radial_derivative_of_u(v: &[f64], grid: &RadialGrid) -> Vec<f64> {
    let n = v.len();
    let dr = grid.dr();
    let last = (n - 1) as isize;
    let at = |j: isize| -> f64 {
        if j < 0 {
            -v[(-j) as usize]
        } else if j > last {
            -v[(2 * last - j) as usize]
        } else {
            v[j as usize]
        }
    };
    let mut out = vec![0.0; n];
    for i in 1..n {
        let j = i as isize;
        let vr = (8.0 * (at(j + 1) - at(j - 1)) - (at(j + 2) - at(j - 2))) / (12.0 * dr);
        let r = grid.r(i);
        out[i] = (vr - v[i] / r) / r;
    }
    // ∂ᵣu is odd in r
    out[0] = 0.0;
    out
}

/// Selects one of the audit balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ball {
    R,
    TwoR,
    FourR,
    R1,
    R2,
}

impl Ball {
    pub const ALL: [Ball; 5] = [Ball::R, Ball::TwoR, Ball::FourR, Ball::R1, Ball::R2];

    pub fn radius(self, radii: &AuditRadii) -> f64 {
        match self {
            Ball::R => radii.radius,
            Ball::TwoR => 2.0 * radii.radius,
            Ball::FourR => 4.0 * radii.radius,
            Ball::R1 => radii.r1,
            Ball::R2 => radii.r2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Ball::R => "R",
            Ball::TwoR => "2R",
            Ball::FourR => "4R",
            Ball::R1 => "r1",
            Ball::R2 => "r2",
        }
    }
}

/// Selects one of the audit shells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shell {
    RToTwoR,
    TwoRToFourR,
    R1ToR2,
}

impl Shell {
    pub const ALL: [Shell; 3] = [Shell::RToTwoR, Shell::TwoRToFourR, Shell::R1ToR2];

    pub fn bounds(self, radii: &AuditRadii) -> (f64, f64) {
        let r = radii.radius;
        match self {
            Shell::RToTwoR => (r, 2.0 * r),
            Shell::TwoRToFourR => (2.0 * r, 4.0 * r),
            Shell::R1ToR2 => (radii.r1, radii.r2),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Shell::RToTwoR => "R_2R",
            Shell::TwoRToFourR => "2R_4R",
            Shell::R1ToR2 => "r1_r2",
        }
    }
}

/// Radii used by the restricted integrals and the cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditRadii {
    pub radius: f64,
    pub r1: f64,
    pub r2: f64,
}

impl AuditRadii {
    /// `r₁ = 3R/2`, `r₂ = 5R/2`.
    pub fn from_radius(radius: f64) -> Self {
        Self {
            radius,
            r1: 1.5 * radius,
            r2: 2.5 * radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BallIntegrals {
    pub radius: f64,
    pub u2_inside: f64,
    pub grad2_inside: f64,
    pub u4_inside: f64,
    pub u2_outside: f64,
    pub grad2_outside: f64,
    pub u4_outside: f64,
}

impl BallIntegrals {
    /// `∫_{|x|≥ρ}(|∇u|² + u²)`.
    pub fn h1_outside(&self) -> f64 {
        self.grad2_outside + self.u2_outside
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ShellIntegrals {
    pub inner: f64,
    pub outer: f64,
    pub u2: f64,
    pub grad2: f64,
}

/// All scalar functionals of one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalRecord {
    pub t: f64,
    pub energy: f64,
    pub linear_energy: f64,
    pub action: f64,
    pub nehari: f64,
    /// `∫u⁴`
    pub l4: f64,
    /// `∫u²`
    pub l2: f64,
    /// `∫|∇u|²`
    pub grad2: f64,
    /// `∫|∂ₜu|²`
    pub kinetic: f64,
    /// `∫α|∂ₜu|²`
    pub damping_density: f64,
    pub sup_u: f64,
    pub balls: [BallIntegrals; 5],
    pub shells: [ShellIntegrals; 3],
}

impl FunctionalRecord {
    pub fn ball(&self, which: Ball) -> &BallIntegrals {
        &self.balls[Ball::ALL.iter().position(|&b| b == which).unwrap()]
    }

    pub fn shell(&self, which: Shell) -> &ShellIntegrals {
        &self.shells[Shell::ALL.iter().position(|&s| s == which).unwrap()]
    }

    /// `‖u‖²_{H¹}`
    pub fn h1(&self) -> f64 {
        self.grad2 + self.l2
    }
}

/// Evaluates every functional of `state` in one pass.
pub fn evaluate_functionals(
    state: &FieldState,
    alpha: &[f64],
    grid: &RadialGrid,
    radii: &AuditRadii,
) -> Result<FunctionalRecord> {
    state.check(grid)?;
    if alpha.len() != grid.len() {
        return Err(Error::validation("damping", "length does not match grid"));
    }
    let fields = NodalFields::new(state, grid);
    let n = grid.len();
    let mut u2 = Vec::with_capacity(n);
    let mut grad2 = Vec::with_capacity(n);
    let mut u4 = Vec::with_capacity(n);
    let mut ut2 = Vec::with_capacity(n);
    let mut damp = Vec::with_capacity(n);
    for i in 0..n {
        let (u, ur, ut) = (fields.u[i], fields.ur[i], fields.ut[i]);
        u2.push(u * u);
        grad2.push(ur * ur);
        u4.push(u * u * u * u);
        ut2.push(ut * ut);
        damp.push(alpha[i] * ut * ut);
    }
    let all = |f: &[f64]| integrate_radial(f, grid, Region::ALL);
    let l2 = all(&u2)?;
    let g2 = all(&grad2)?;
    let l4 = all(&u4)?;
    let kinetic = all(&ut2)?;
    let damping_density = all(&damp)?;

    let mut balls = [BallIntegrals::default(); 5];
    for (slot, ball) in balls.iter_mut().zip(Ball::ALL) {
        let rho = ball.radius(radii);
        let inside = Region::ball(rho);
        let outside = Region::outside(rho.min(grid.r_max()));
        *slot = BallIntegrals {
            radius: rho,
            u2_inside: integrate_radial(&u2, grid, inside)?,
            grad2_inside: integrate_radial(&grad2, grid, inside)?,
            u4_inside: integrate_radial(&u4, grid, inside)?,
            u2_outside: integrate_radial(&u2, grid, outside)?,
            grad2_outside: integrate_radial(&grad2, grid, outside)?,
            u4_outside: integrate_radial(&u4, grid, outside)?,
        };
    }
    let mut shells = [ShellIntegrals::default(); 3];
    for (slot, shell) in shells.iter_mut().zip(Shell::ALL) {
        let (inner, outer) = shell.bounds(radii);
        let region = Region::shell(inner.min(grid.r_max()), outer);
        *slot = ShellIntegrals {
            inner,
            outer,
            u2: integrate_radial(&u2, grid, region)?,
            grad2: integrate_radial(&grad2, grid, region)?,
        };
    }

    let linear_energy = 0.5 * (kinetic + g2 + l2);
    Ok(FunctionalRecord {
        t: state.t,
        energy: linear_energy - 0.25 * l4,
        linear_energy,
        action: 0.5 * (g2 + l2) - 0.25 * l4,
        nehari: g2 + l2 - l4,
        l4,
        l2,
        grad2: g2,
        kinetic,
        damping_density,
        sup_u: fields.u.iter().fold(0.0f64, |m, x| m.max(x.abs())),
        balls,
        shells,
    })
}

/// The three whole-space integrals of `u` alone: `(∫u², ∫|∇u|², ∫u⁴)`.
pub fn static_norms(state: &FieldState, grid: &RadialGrid) -> Result<(f64, f64, f64)> {
    state.check(grid)?;
    let u = state.u(grid);
    let ur = radial_derivative_of_u(&state.v, grid);
    let sq: Vec<f64> = u.iter().map(|x| x * x).collect();
    let gr: Vec<f64> = ur.iter().map(|x| x * x).collect();
    let q4: Vec<f64> = sq.iter().map(|x| x * x).collect();
    Ok((
        integrate_radial(&sq, grid, Region::ALL)?,
        integrate_radial(&gr, grid, Region::ALL)?,
        integrate_radial(&q4, grid, Region::ALL)?,
    ))
}

/// `K[u] = ∫(|∇u|² + u² − u⁴)` of the position component.
pub fn nehari(state: &FieldState, grid: &RadialGrid) -> Result<f64> {
    let (l2, g2, l4) = static_norms(state, grid)?;
    Ok(g2 + l2 - l4)
}

/// `∫u⁴ / (‖u‖²_{H¹} ‖u‖²_{L²})`.
pub fn gn_ratio(state: &FieldState, grid: &RadialGrid) -> Result<f64> {
    let (l2, g2, l4) = static_norms(state, grid)?;
    if l2 == 0.0 {
        return Err(Error::Degenerate("u is identically zero".into()));
    }
    Ok(l4 / ((g2 + l2) * l2))
}

#[cfg(test)]
mod tests {
    use super::*;

    // (π/2)^{3/2}: ∫_{ℝ³} e^{−2|x|²} dx
    fn gaussian_mass() -> f64 {
        (PI / 2.0).powf(1.5)
    }

    #[test]
    fn ball_volume() {
        let g = RadialGrid::new(2.0, 2001).unwrap();
        let ones = vec![1.0; g.len()];
        let v = integrate_radial(&ones, &g, Region::ball(1.0)).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-5);
    }

    #[test]
    fn zero_integrand() {
        let g = RadialGrid::new(2.0, 101).unwrap();
        assert_eq!(
            integrate_radial(&vec![0.0; 101], &g, Region::ALL).unwrap(),
            0.0
        );
    }

    #[test]
    fn reports_offending_node() {
        let g = RadialGrid::new(2.0, 101).unwrap();
        let mut f = vec![1.0; 101];
        f[42] = f64::INFINITY;
        assert_eq!(
            integrate_radial(&f, &g, Region::ALL),
            Err(Error::NonFinite {
                field: "integrand",
                node: 42
            })
        );
    }

    #[test]
    fn gaussian_integral() {
        let g = RadialGrid::new(8.0, 1601).unwrap();
        let f = g.sample(|r| (-2.0 * r * r).exp());
        let v = integrate_radial(&f, &g, Region::ALL).unwrap();
        assert!((v - gaussian_mass()).abs() < 1e-4);
    }

    #[test]
    fn off_node_regions_are_additive() {
        let g = RadialGrid::new(8.0, 801).unwrap();
        let f = g.sample(|r| (-r * r).exp() * (1.0 + r));
        let whole = integrate_radial(&f, &g, Region::ALL).unwrap();
        for rho in [0.0, 0.013, 1.0, 2.345, 7.999, 8.0] {
            let a = integrate_radial(&f, &g, Region::ball(rho)).unwrap();
            let b = integrate_radial(&f, &g, Region::outside(rho)).unwrap();
            assert!((a + b - whole).abs() <= 1e-13 * whole, "rho = {rho}");
        }
    }

    #[test]
    fn rejects_reversed_region() {
        let g = RadialGrid::new(8.0, 801).unwrap();
        let f = vec![1.0; 801];
        assert!(integrate_radial(&f, &g, Region::shell(3.0, 2.0)).is_err());
    }

    #[test]
    fn zero_state_functionals() {
        let g = RadialGrid::new(10.0, 501).unwrap();
        let s = FieldState::zero(&g);
        let rec = evaluate_functionals(&s, &vec![1.0; 501], &g, &AuditRadii::from_radius(2.0))
            .unwrap();
        assert_eq!(rec.energy, 0.0);
        assert_eq!(rec.linear_energy, 0.0);
        assert_eq!(rec.action, 0.0);
        assert_eq!(rec.nehari, 0.0);
    }

    #[test]
    fn velocity_only_state() {
        let g = RadialGrid::new(10.0, 2001).unwrap();
        let s = FieldState::from_radial(&g, |_| 0.0, |r| (-r * r).exp());
        let rec = evaluate_functionals(&s, &vec![0.0; g.len()], &g, &AuditRadii::from_radius(2.0))
            .unwrap();
        assert!((rec.energy - 0.5 * gaussian_mass()).abs() < 1e-5);
        assert_eq!(rec.energy, rec.linear_energy);
        assert_eq!(rec.action, 0.0);
        assert_eq!(rec.nehari, 0.0);
        assert_eq!(rec.damping_density, 0.0);
    }

    #[test]
    fn gn_ratio_rejects_zero() {
        let g = RadialGrid::new(10.0, 101).unwrap();
        assert!(matches!(
            gn_ratio(&FieldState::zero(&g), &g),
            Err(Error::Degenerate(_))
        ));
    }
}
