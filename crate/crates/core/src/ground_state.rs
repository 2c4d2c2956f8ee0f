//! Positive radial solution of `−ΔQ + Q = Q³` by shooting on `Q(0)`.
//!
//! The radial ODE `Q″ + (2/r)Q′ = Q − Q³` is started from its power series at
//! the origin and continued with classic RK4 (four substeps per grid cell). A trajectory that crosses zero started too high; one that
//! turns upward (`Q′ > 0`) or exceeds `2Q(0)` started too low. Bisection
//! between the two brackets the decaying separatrix, and the tail beyond the
//! last trustworthy node is replaced by `c·e^{−r}/r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{gn_ratio, static_norms};
use crate::grid::RadialGrid;
use crate::state::FieldState;

/// Default search interval for `Q(0)`.
pub const DEFAULT_BRACKET: (f64, f64) = (0.1, 20.0);
pub const DEFAULT_TOL: f64 = 1e-10;
/// Smallest `r_max` a shooting grid may have.
pub const MIN_RADIUS: f64 = 15.0;
/// `|K[Q]| / ‖Q‖²_{H¹}` above this marks a profile as non-stationary.
pub const NEHARI_REL_TOL: f64 = 1e-3;
/// Residual bound, as a multiple of the bisection tolerance.
pub const RESIDUAL_FACTOR: f64 = 1e3;
/// Relative spread of the bracketing trajectories at the tail matching node.
const MATCH_SPREAD: f64 = 1e-6;
/// The power series replaces RK4 on `[0, SERIES_RADIUS]`.
const SERIES_RADIUS: f64 = 0.3;
const SERIES_TERMS: usize = 24;
const RK4_SUBSTEPS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    /// crossed zero: `Q(0)` too large
    Crossed,
    /// turned upward: `Q(0)` too small
    TurnedUp,
}

struct Trajectory {
    q: Vec<f64>,
    fate: Fate,
}

fn rhs(r: f64, q: f64, dq: f64) -> f64 {
    q - q * q * q - 2.0 * dq / r
}

/// Even power series `Q(r) = Σ cₖ r^{2k}` about the origin with `Q(0) = a`.
///
/// From `Q″ + (2/r)Q′ = Q − Q³`: `2k(2k+1)cₖ = cₖ₋₁ − [Q³]ₖ₋₁`.
fn series_coefficients(a: f64, terms: usize) -> Vec<f64> {
    let mut c = vec![a];
    for k in 1..terms {
        let j = k - 1;
        // coefficient of r^{2j} in Q³
        let mut cube = 0.0;
        for p in 0..=j {
            for q in 0..=(j - p) {
                cube += c[p] * c[q] * c[j - p - q];
            }
        }
        c.push((c[j] - cube) / ((2 * k * (2 * k + 1)) as f64));
    }
    c
}

fn series_eval(c: &[f64], r: f64) -> (f64, f64) {
    let r2 = r * r;
    let (mut q, mut dq) = (0.0, 0.0);
    for (k, ck) in c.iter().enumerate().rev() {
        q = q * r2 + ck;
        if k > 0 {
            dq = dq * r2 + 2.0 * k as f64 * ck;
        }
    }
    // dq accumulated Σ 2k cₖ r^{2k−2}
    (q, dq * r)
}

/// Integrates from the origin until the trajectory is classified or the grid
/// ends. Unclassified trajectories are decided by the sign of the growing
/// mode, `Q′ + (1 + 1/r)Q`.
fn shoot(a: f64, grid: &RadialGrid) -> Trajectory {
    let n = grid.len();
    let h = grid.dr();
    let coeffs = series_coefficients(a, SERIES_TERMS);
    // keep the truncated tail of the series below round-off
    let last = coeffs[SERIES_TERMS - 1].abs().max(f64::MIN_POSITIVE);
    let reach = (1e-18 * a.abs() / last).powf(1.0 / (2.0 * (SERIES_TERMS - 1) as f64));
    let start = ((SERIES_RADIUS.min(reach) / h).floor() as usize).clamp(1, n - 2);
    let mut q = Vec::with_capacity(n);
    let (mut y, mut dy) = (a, 0.0);
    for i in 0..=start {
        (y, dy) = series_eval(&coeffs, grid.r(i));
        q.push(y);
        if i > 0 && dy > 0.0 {
            return Trajectory {
                q,
                fate: Fate::TurnedUp,
            };
        }
    }
    let sub = h / RK4_SUBSTEPS as f64;
    for i in start..n - 1 {
        for j in 0..RK4_SUBSTEPS {
            let r = grid.r(i) + j as f64 * sub;
            let k1 = (dy, rhs(r, y, dy));
            let k2 = (
                dy + 0.5 * sub * k1.1,
                rhs(r + 0.5 * sub, y + 0.5 * sub * k1.0, dy + 0.5 * sub * k1.1),
            );
            let k3 = (
                dy + 0.5 * sub * k2.1,
                rhs(r + 0.5 * sub, y + 0.5 * sub * k2.0, dy + 0.5 * sub * k2.1),
            );
            let k4 = (dy + sub * k3.1, rhs(r + sub, y + sub * k3.0, dy + sub * k3.1));
            y += sub / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            dy += sub / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        q.push(y);
        if y < 0.0 {
            return Trajectory {
                q,
                fate: Fate::Crossed,
            };
        }
        if dy > 0.0 || y > 2.0 * a {
            return Trajectory {
                q,
                fate: Fate::TurnedUp,
            };
        }
    }
    let r = grid.r_max();
    let growing = dy + (1.0 + 1.0 / r) * y;
    Trajectory {
        q,
        fate: if growing > 0.0 {
            Fate::TurnedUp
        } else {
            Fate::Crossed
        },
    }
}

/// Sampled ground state and its norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub grid: RadialGrid,
    pub q: Vec<f64>,
    /// shooting value `Q(0)`
    pub q0: f64,
    /// `J[Q]`
    pub h0: f64,
    pub l2: f64,
    pub grad2: f64,
    pub l4: f64,
    pub residual_sup: f64,
    pub matching_radius: f64,
    pub tol: f64,
}

impl GroundState {
    /// `‖Q‖²_{H¹}`
    pub fn h1(&self) -> f64 {
        self.grad2 + self.l2
    }

    /// `(λQ, 0)` on the ground-state grid.
    pub fn state(&self, lambda: f64) -> FieldState {
        let mut s = FieldState::from_nodal(&self.grid, &self.q, &vec![0.0; self.q.len()])
            .expect("ground state sampled on its own grid");
        if lambda != 1.0 {
            s = s.scaled_u(lambda);
        }
        s
    }

    /// Copy with every sample multiplied by `lambda`; norms are recomputed.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let q: Vec<f64> = self.q.iter().map(|x| lambda * x).collect();
        Self::from_samples(self.grid.clone(), q, self.tol, self.matching_radius)
    }

    /// Assembles a ground state record from samples of `Q`.
    pub fn from_samples(grid: RadialGrid, q: Vec<f64>, tol: f64, matching_radius: f64) -> Result<Self> {
        if q.len() != grid.len() {
            return Err(Error::validation("ground state", "length does not match grid"));
        }
        let state = FieldState::from_nodal(&grid, &q, &vec![0.0; q.len()])?;
        let (l2, grad2, l4) = static_norms(&state, &grid)?;
        let residual_sup = ode_residual(&q, &grid).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(Self {
            q0: q[0],
            h0: 0.5 * (grad2 + l2) - 0.25 * l4,
            l2,
            grad2,
            l4,
            residual_sup,
            matching_radius,
            tol,
            grid,
            q,
        })
    }
}

/// Node-wise `Q″ + (2/r)Q′ − Q + Q³` with eighth-order central differences
/// and the even extension `Q(−r) = Q(r)`. The last four nodes are reported as 0.
pub fn ode_residual(q: &[f64], grid: &RadialGrid) -> Vec<f64> {
    let n = q.len();
    let h = grid.dr();
    let at = |i: isize| q[i.unsigned_abs()];
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate().take(n.saturating_sub(4)) {
        let k = i as isize;
        let f = |d: isize| at(k + d);
        let d2 = (-(f(-4) + f(4)) / 560.0 + 8.0 * (f(-3) + f(3)) / 315.0
            - (f(-2) + f(2)) / 5.0
            + 8.0 * (f(-1) + f(1)) / 5.0
            - 205.0 * f(0) / 72.0)
            / (h * h);
        let lap = if i == 0 {
            3.0 * d2
        } else {
            let d1 = ((f(-4) - f(4)) / 280.0 - 4.0 * (f(-3) - f(3)) / 105.0
                + (f(-2) - f(2)) / 5.0
                - 4.0 * (f(-1) - f(1)) / 5.0)
                / h;
            d2 + 2.0 * d1 / grid.r(i)
        };
        let c = f(0);
        *slot = lap - c + c * c * c;
    }
    out
}

pub fn shoot_ground_state(grid: &RadialGrid, tol: f64) -> Result<GroundState> {
    shoot_ground_state_in(grid, tol, DEFAULT_BRACKET)
}

/// Shooting restricted to initial values in `bracket`.
pub fn shoot_ground_state_in(grid: &RadialGrid, tol: f64, bracket: (f64, f64)) -> Result<GroundState> {
    if !(tol > 1e-14 && tol < 1e-3) {
        return Err(Error::validation("tolerance", format!("{tol} not in (1e-14, 1e-3)")));
    }
    if grid.r_max() < MIN_RADIUS {
        return Err(Error::validation(
            "ground-state grid",
            format!("r_max = {} < {MIN_RADIUS}", grid.r_max()),
        ));
    }
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::validation("bracket", format!("[{lo}, {hi}]")));
    }
    if shoot(lo, grid).fate != Fate::TurnedUp || shoot(hi, grid).fate != Fate::Crossed {
        return Err(Error::Solver(format!(
            "no sign change of the shooting classification on [{lo}, {hi}]"
        )));
    }
    // Bisect to the resolution of f64; the tail matching below depends on
    // how long the bracketing trajectories stay together, and the final
    // width is in any case ≤ tol.
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match shoot(mid, grid).fate {
            Fate::TurnedUp => lo = mid,
            Fate::Crossed => hi = mid,
        }
    }

    debug_assert!(hi - lo <= tol);
    let a = 0.5 * (lo + hi);
    let (low, high, mid) = (shoot(lo, grid).q, shoot(hi, grid).q, shoot(a, grid).q);
    let reach = low.len().min(high.len()).min(mid.len());
    let mut m = (2..reach)
        .find(|&i| (high[i] - low[i]).abs() > MATCH_SPREAD * mid[i].abs())
        .unwrap_or(reach - 1);
    // step back from the split so that the matched value is still clean
    m = m.saturating_sub((0.5 / grid.dr()) as usize).max(2);
    let rm = grid.r(m);
    let qm = mid[m];
    let mut q = mid[..=m].to_vec();
    q.extend((m + 1..grid.len()).map(|i| {
        let r = grid.r(i);
        qm * rm / r * (-(r - rm)).exp()
    }));

    let gs = GroundState::from_samples(grid.clone(), q, tol, rm)?;
    if gs.residual_sup > RESIDUAL_FACTOR * tol {
        return Err(Error::Accuracy(format!(
            "ODE residual {:.3e} exceeds {:.3e}",
            gs.residual_sup,
            RESIDUAL_FACTOR * tol
        )));
    }
    Ok(gs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateReport {
    pub residual_sup: f64,
    pub nehari: f64,
    pub nehari_rel: f64,
    /// `|h₀ − ¼‖Q‖²_{H¹}|`
    pub threshold_gap: f64,
    /// `2F = ‖Q‖²_{H¹}`
    pub two_f: f64,
    pub four_h0: f64,
    pub gn_ratio: f64,
    pub stationary: bool,
}

/// Re-derives every check from the samples of `gs`.
pub fn verify_ground_state(gs: &GroundState) -> GroundStateReport {
    let grid = &gs.grid;
    let state = FieldState::from_nodal(grid, &gs.q, &vec![0.0; gs.q.len()])
        .expect("ground state sampled on its own grid");
    let (l2, grad2, l4) = static_norms(&state, grid).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    let h1 = grad2 + l2;
    let h0 = 0.5 * h1 - 0.25 * l4;
    let residual_sup = ode_residual(&gs.q, grid)
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let nehari = h1 - l4;
    let nehari_rel = nehari.abs() / h1;
    GroundStateReport {
        residual_sup,
        nehari,
        nehari_rel,
        threshold_gap: (h0 - 0.25 * h1).abs(),
        two_f: h1,
        four_h0: 4.0 * h0,
        gn_ratio: gn_ratio(&state, grid).unwrap_or(f64::NAN),
        stationary: nehari_rel <= NEHARI_REL_TOL && residual_sup <= RESIDUAL_FACTOR * gs.tol,
    }
}
