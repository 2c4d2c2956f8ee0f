//! Space-time ledgers of the two multiplier identities.
//!
//! Multiplying the equation by `ϕ(x·∇u + u)` and integrating by parts gives
//! `0 = I + II + III + IV + V + VI` with
//!
//! ```text
//! I   = [∫ ∂ₜu (ϕ x·∇u + ϕu)]₀ᵀ
//! II  = ∬ α ∂ₜu (ϕ x·∇u + ϕu)
//! III = −∬ ∇·(∇u (ϕ x·∇u + ϕu) − ϕx(|∇u|² + u² − |∂ₜu|²)/2 + ϕx u⁴/4)
//! IV  = ∬ (∇u·x + u)(∇u·∇ϕ) − (∇ϕ·x/2)(|∇u|² − |∂ₜu|² + u²)
//! V   = V₁ + V₂,  V₁ = −∬ ϕu⁴/4,  V₂ = ∬ (x·∇ϕ) u⁴/4
//! VI  = ∬ (ϕ/2)(|∇u|² + |∂ₜu|² − u²)
//! ```
//!
//! Multiplying by `ψu` instead gives the residual
//! `[∫ψ ∂ₜu u]₀ᵀ + ∬ ψ(|∇u|² + u² − u⁴) − (Δψ/2)u² − ψ|∂ₜu|² + αψ ∂ₜu u`,
//! which vanishes for exact solutions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::trace::DenseTrace;
use crate::error::{Error, Result};
use crate::functionals::{integrate_radial, Cutoff, CutoffKind, NodalFields, Region};
use crate::grid::RadialGrid;
use crate::state::FieldState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierLedger {
    pub i: f64,
    pub ii: f64,
    pub iii: f64,
    pub iv: f64,
    pub v1: f64,
    pub v2: f64,
    pub v: f64,
    pub vi: f64,
    pub sum: f64,
    /// `|I| + |II| + … + |VI|`, the scale for "vanishes up to quadrature"
    pub scale: f64,
    pub psi_residual: Option<f64>,
    /// sum of the magnitudes of the terms of the `ψ` identity
    pub psi_scale: Option<f64>,
}

/// Running trapezoid over a uniformly spaced stream of states.
#[derive(Debug, Clone)]
struct TimeIntegral<const K: usize> {
    dt: f64,
    last_t: Option<f64>,
    last: [f64; K],
    total: [f64; K],
}

impl<const K: usize> TimeIntegral<K> {
    fn new(dt: f64) -> Self {
        Self {
            dt,
            last_t: None,
            last: [0.0; K],
            total: [0.0; K],
        }
    }

    fn push(&mut self, t: f64, values: [f64; K]) -> Result<()> {
        if let Some(t0) = self.last_t {
            let h = t - t0;
            if (h - self.dt).abs() > 1e-6 * self.dt {
                return Err(Error::validation(
                    "trace",
                    format!("states at {t0} and {t} are not one step ({}) apart; dense cadence required", self.dt),
                ));
            }
            for k in 0..K {
                self.total[k] += 0.5 * h * (self.last[k] + values[k]);
            }
        }
        self.last_t = Some(t);
        self.last = values;
        Ok(())
    }
}

/// `4π ∫ ∂ᵣg dr` with central differences and the trapezoid rule.
fn integrate_derivative(g: &[f64], grid: &RadialGrid) -> f64 {
    let n = g.len();
    let h = grid.dr();
    let mut d = vec![0.0; n];
    d[0] = (g[1] - g[0]) / h;
    d[n - 1] = (g[n - 1] - g[n - 2]) / h;
    for i in 1..n - 1 {
        d[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    }
    let interior: f64 = d[1..n - 1].iter().sum();
    4.0 * PI * h * (interior + 0.5 * (d[0] + d[n - 1]))
}

fn all(f: &[f64], grid: &RadialGrid) -> Result<f64> {
    integrate_radial(f, grid, Region::ALL)
}

/// Streams states in time order and accumulates the `ϕ` ledger.
#[derive(Debug, Clone)]
pub struct MultiplierAccumulator<'a> {
    phi: &'a Cutoff,
    alpha: &'a [f64],
    grid: &'a RadialGrid,
    boundary_first: Option<f64>,
    boundary_last: f64,
    // II, III, IV, V₁, V₂, VI
    integral: TimeIntegral<6>,
}

impl<'a> MultiplierAccumulator<'a> {
    pub fn new(phi: &'a Cutoff, alpha: &'a [f64], grid: &'a RadialGrid, dt: f64) -> Result<Self> {
        if phi.kind != CutoffKind::Phi {
            return Err(Error::validation("cutoff", "multiplier ledger needs the ϕ cutoff"));
        }
        if phi.values.len() != grid.len() || alpha.len() != grid.len() {
            return Err(Error::validation("cutoff", "length does not match grid"));
        }
        Ok(Self {
            phi,
            alpha,
            grid,
            boundary_first: None,
            boundary_last: 0.0,
            integral: TimeIntegral::new(dt),
        })
    }

    pub fn push(&mut self, state: &FieldState) -> Result<()> {
        state.check(self.grid)?;
        let grid = self.grid;
        let f = NodalFields::new(state, grid);
        let n = grid.len();
        let (phi, dphi) = (&self.phi.values, &self.phi.d1);
        let mut boundary = vec![0.0; n];
        let mut ii = vec![0.0; n];
        let mut flux = vec![0.0; n];
        let mut iv = vec![0.0; n];
        let mut v1 = vec![0.0; n];
        let mut v2 = vec![0.0; n];
        let mut vi = vec![0.0; n];
        for k in 0..n {
            let r = grid.r(k);
            let (u, ur, ut) = (f.u[k], f.ur[k], f.ut[k]);
            let (ph, dph) = (phi[k], dphi[k]);
            let m = ph * (r * ur + u);
            let u4 = u * u * u * u;
            boundary[k] = ut * m;
            ii[k] = self.alpha[k] * ut * m;
            let radial_flux =
                ur * m - 0.5 * ph * r * (ur * ur + u * u - ut * ut) - 0.25 * ph * r * u4;
            flux[k] = r * r * radial_flux;
            iv[k] = (r * ur + u) * (ur * dph) - 0.5 * r * dph * (ur * ur - ut * ut + u * u);
            v1[k] = -0.25 * ph * u4;
            v2[k] = 0.25 * r * dph * u4;
            vi[k] = 0.5 * ph * (ur * ur + ut * ut - u * u);
        }
        let b = all(&boundary, grid)?;
        if self.boundary_first.is_none() {
            self.boundary_first = Some(b);
        }
        self.boundary_last = b;
        self.integral.push(
            state.t,
            [
                all(&ii, grid)?,
                -integrate_derivative(&flux, grid),
                all(&iv, grid)?,
                all(&v1, grid)?,
                all(&v2, grid)?,
                all(&vi, grid)?,
            ],
        )
    }

    pub fn finish(self) -> MultiplierLedger {
        let i = self.boundary_last - self.boundary_first.unwrap_or(0.0);
        let [ii, iii, iv, v1, v2, vi] = self.integral.total;
        let v = v1 + v2;
        MultiplierLedger {
            i,
            ii,
            iii,
            iv,
            v1,
            v2,
            v,
            vi,
            sum: i + ii + iii + iv + v + vi,
            scale: [i, ii, iii, iv, v1, v2, vi].iter().map(|x| x.abs()).sum(),
            psi_residual: None,
            psi_scale: None,
        }
    }
}

/// Streams states in time order and accumulates the `ψu` residual.
#[derive(Debug, Clone)]
pub struct PsiAccumulator<'a> {
    psi: &'a Cutoff,
    alpha: &'a [f64],
    grid: &'a RadialGrid,
    boundary_first: Option<f64>,
    boundary_last: f64,
    // gradient, mass, quartic, Laplacian, kinetic and damping terms
    integral: TimeIntegral<6>,
}

/// Residual of the `ψ` identity with the scale it is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiResidual {
    pub residual: f64,
    pub scale: f64,
}

impl<'a> PsiAccumulator<'a> {
    pub fn new(psi: &'a Cutoff, alpha: &'a [f64], grid: &'a RadialGrid, dt: f64) -> Result<Self> {
        if psi.kind != CutoffKind::Psi {
            return Err(Error::validation("cutoff", "ψ identity needs the ψ cutoff"));
        }
        if psi.values.len() != grid.len() || alpha.len() != grid.len() {
            return Err(Error::validation("cutoff", "length does not match grid"));
        }
        Ok(Self {
            psi,
            alpha,
            grid,
            boundary_first: None,
            boundary_last: 0.0,
            integral: TimeIntegral::new(dt),
        })
    }

    pub fn push(&mut self, state: &FieldState) -> Result<()> {
        state.check(self.grid)?;
        let grid = self.grid;
        let f = NodalFields::new(state, grid);
        let n = grid.len();
        let mut boundary = vec![0.0; n];
        let mut terms = vec![vec![0.0; n]; 6];
        for k in 0..n {
            let (u, ur, ut) = (f.u[k], f.ur[k], f.ut[k]);
            let (ps, lap) = (self.psi.values[k], self.psi.laplacian[k]);
            boundary[k] = ps * ut * u;
            terms[0][k] = ps * ur * ur;
            terms[1][k] = ps * u * u;
            terms[2][k] = -ps * u * u * u * u;
            terms[3][k] = -0.5 * lap * u * u;
            terms[4][k] = -ps * ut * ut;
            terms[5][k] = self.alpha[k] * ps * ut * u;
        }
        let b = all(&boundary, grid)?;
        if self.boundary_first.is_none() {
            self.boundary_first = Some(b);
        }
        self.boundary_last = b;
        let mut values = [0.0; 6];
        for (value, term) in values.iter_mut().zip(&terms) {
            *value = all(term, grid)?;
        }
        self.integral.push(state.t, values)
    }

    pub fn finish(self) -> PsiResidual {
        let boundary = self.boundary_last - self.boundary_first.unwrap_or(0.0);
        let totals = self.integral.total;
        PsiResidual {
            residual: boundary + totals.iter().sum::<f64>(),
            scale: boundary.abs() + totals.iter().map(|x| x.abs()).sum::<f64>(),
        }
    }
}

/// Terms I–VI over a dense trace.
pub fn multiplier_terms(
    trace: &DenseTrace,
    phi: &Cutoff,
    alpha: &[f64],
    grid: &RadialGrid,
) -> Result<MultiplierLedger> {
    trace.require_dense()?;
    let mut acc = MultiplierAccumulator::new(phi, alpha, grid, trace.dt)?;
    for s in &trace.states {
        acc.push(s)?;
    }
    Ok(acc.finish())
}

pub fn psi_identity_residual(
    trace: &DenseTrace,
    psi: &Cutoff,
    alpha: &[f64],
    grid: &RadialGrid,
) -> Result<PsiResidual> {
    trace.require_dense()?;
    let mut acc = PsiAccumulator::new(psi, alpha, grid, trace.dt)?;
    for s in &trace.states {
        acc.push(s)?;
    }
    Ok(acc.finish())
}

/// Terms I–VI together with the `ψ` residual.
pub fn multiplier_ledger(
    trace: &DenseTrace,
    phi: &Cutoff,
    psi: &Cutoff,
    alpha: &[f64],
    grid: &RadialGrid,
) -> Result<MultiplierLedger> {
    let mut ledger = multiplier_terms(trace, phi, alpha, grid)?;
    let psi = psi_identity_residual(trace, psi, alpha, grid)?;
    ledger.psi_residual = Some(psi.residual);
    ledger.psi_scale = Some(psi.scale);
    Ok(ledger)
}
