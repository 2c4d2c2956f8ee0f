//! Smooth radial test functions `ϕ = φ⁴` and `ψ = κ⁴` used by the multiplier
//! identities, with their bounding constants measured on the grid.

use serde::{Deserialize, Serialize};

use super::AuditRadii;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::smooth;

/// `ϕ` values below this are excluded from the `|∇ϕ|/ϕ^{7/8}` scan.
const PHI_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffKind {
    /// `ϕ = φ⁴`, equal to 1 on `B_{r₁}` and supported in `B_{r₂}`.
    Phi,
    /// `ψ = κ⁴`, equal to 0 on `B_R` and 1 outside `B_{2R}`.
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CutoffConstants {
    Phi {
        /// `sup |∇ϕ| / (4 ϕ^{7/8})`, equivalently `sup |∇φ| / φ^{1/2}`.
        gamma: f64,
        /// `max(1, sup|xϕ|, sup|x||∇ϕ|, sup|∇φ|, sup|∇φ^{7/8}|)`.
        c1: f64,
    },
    Psi {
        beta1: f64,
        beta2: f64,
        /// `4β₂ + 12β₁`
        beta_tilde: f64,
        /// measured `sup |Δψ|`
        laplacian_sup: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub kind: CutoffKind,
    pub radii: AuditRadii,
    pub values: Vec<f64>,
    /// radial derivative
    pub d1: Vec<f64>,
    pub laplacian: Vec<f64>,
    pub constants: CutoffConstants,
}

/// Base profile (φ or κ) with first and second radial derivatives.
fn base_profile(kind: CutoffKind, radii: &AuditRadii, r: f64) -> (f64, f64, f64) {
    match kind {
        CutoffKind::Phi => {
            let width = radii.r2 - radii.r1;
            let x = (r - radii.r1) / width;
            (
                1.0 - smooth::step(x),
                -smooth::step_d1(x) / width,
                -smooth::step_d2(x) / (width * width),
            )
        }
        CutoffKind::Psi => {
            let width = radii.radius;
            let x = (r - radii.radius) / width;
            (
                smooth::step(x),
                smooth::step_d1(x) / width,
                smooth::step_d2(x) / (width * width),
            )
        }
    }
}

fn laplacian(d1: f64, d2: f64, r: f64) -> f64 {
    if r == 0.0 {
        // both cutoffs are locally constant at the origin
        3.0 * d2
    } else {
        d2 + 2.0 * d1 / r
    }
}

pub fn build_cutoff(kind: CutoffKind, radii: AuditRadii, grid: &RadialGrid) -> Result<Cutoff> {
    match kind {
        CutoffKind::Phi => {
            if !(radii.r1 > 0.0 && radii.r1 < radii.r2 && radii.r2 <= grid.r_max()) {
                return Err(Error::validation(
                    "cutoff radii",
                    format!(
                        "need 0 < r1 < r2 ≤ r_max, got r1 = {}, r2 = {}, r_max = {}",
                        radii.r1,
                        radii.r2,
                        grid.r_max()
                    ),
                ));
            }
        }
        CutoffKind::Psi => {
            if !(radii.radius > 0.0 && 2.0 * radii.radius <= grid.r_max()) {
                return Err(Error::validation(
                    "cutoff radii",
                    format!(
                        "need 0 < 2R ≤ r_max, got R = {}, r_max = {}",
                        radii.radius,
                        grid.r_max()
                    ),
                ));
            }
        }
    }

    let n = grid.len();
    let mut values = Vec::with_capacity(n);
    let mut d1 = Vec::with_capacity(n);
    let mut lap = Vec::with_capacity(n);
    // sup trackers for the constants
    let (mut gamma, mut c1) = (0.0f64, 1.0f64);
    let (mut beta1, mut beta2, mut lap_sup) = (0.0f64, 0.0f64, 0.0f64);

    for r in grid.nodes() {
        let (b, b1, b2) = base_profile(kind, &radii, r);
        let b3 = b * b * b;
        let value = b3 * b;
        let first = 4.0 * b3 * b1;
        let second = 12.0 * b * b * b1 * b1 + 4.0 * b3 * b2;
        let l = laplacian(first, second, r);
        values.push(value);
        d1.push(first);
        lap.push(l);

        match kind {
            CutoffKind::Phi => {
                if value > PHI_FLOOR {
                    gamma = gamma.max(first.abs() / (4.0 * value.powf(0.875)));
                }
                let d_phi78 = if b > 0.0 {
                    0.875 * b.powf(-0.125) * b1.abs()
                } else {
                    0.0
                };
                c1 = c1
                    .max(r * value)
                    .max(r * first.abs())
                    .max(b1.abs())
                    .max(d_phi78);
            }
            CutoffKind::Psi => {
                beta1 = beta1.max(b1.abs());
                beta2 = beta2.max(laplacian(b1, b2, r).abs());
                lap_sup = lap_sup.max(l.abs());
            }
        }
    }

    let constants = match kind {
        CutoffKind::Phi => CutoffConstants::Phi { gamma, c1 },
        CutoffKind::Psi => CutoffConstants::Psi {
            beta1,
            beta2,
            beta_tilde: 4.0 * beta2 + 12.0 * beta1,
            laplacian_sup: lap_sup,
        },
    };
    Ok(Cutoff {
        kind,
        radii,
        values,
        d1,
        laplacian: lap,
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> RadialGrid {
        RadialGrid::new(10.0, 1001).unwrap()
    }

    #[test]
    fn phi_plateau_and_support() {
        let g = grid();
        let c = build_cutoff(CutoffKind::Phi, AuditRadii::from_radius(2.0), &g).unwrap();
        assert_eq!(c.values[0], 1.0);
        assert_eq!(c.values[g.nearest(3.0)], 1.0);
        assert_eq!(c.values[g.nearest(5.0)], 0.0);
        for (i, &x) in c.values.iter().enumerate() {
            let r = g.r(i);
            assert!((0.0..=1.0).contains(&x));
            if r <= 3.0 {
                assert_eq!(x, 1.0);
                assert_eq!(c.d1[i], 0.0);
            }
            if r >= 5.0 {
                assert_eq!(x, 0.0);
                assert_eq!(c.laplacian[i], 0.0);
            }
        }
    }

    #[test]
    fn psi_plateau_and_support() {
        let g = grid();
        let c = build_cutoff(CutoffKind::Psi, AuditRadii::from_radius(2.0), &g).unwrap();
        assert_eq!(c.values[g.nearest(2.0)], 0.0);
        assert_eq!(c.values[g.nearest(4.0)], 1.0);
        for (i, &x) in c.values.iter().enumerate() {
            let r = g.r(i);
            assert!((0.0..=1.0).contains(&x));
            if r <= 2.0 {
                assert_eq!(x, 0.0);
            }
            if r >= 4.0 {
                assert_eq!(x, 1.0);
            }
        }
    }

    #[test]
    fn phi_gamma_is_finite_and_matches_scan() {
        let g = grid();
        let c = build_cutoff(CutoffKind::Phi, AuditRadii::from_radius(2.0), &g).unwrap();
        // independent scan of |∇φ|/φ^{1/2} with φ = ϕ^{1/4}
        let mut brute = 0.0f64;
        for i in 1..g.len() - 1 {
            if c.values[i] > PHI_FLOOR {
                let phi = c.values[i].powf(0.25);
                let dphi = (c.values[i + 1].powf(0.25) - c.values[i - 1].powf(0.25))
                    / (2.0 * g.dr());
                brute = brute.max(dphi.abs() / phi.sqrt());
            }
        }
        let CutoffConstants::Phi { gamma, c1 } = c.constants else {
            panic!("wrong constants");
        };
        assert!(gamma.is_finite() && c1.is_finite() && c1 >= 1.0);
        assert!((gamma - brute).abs() < 1e-2 * gamma, "{gamma} vs {brute}");
    }

    #[test]
    fn laplacian_matches_differences() {
        let g = grid();
        for kind in [CutoffKind::Phi, CutoffKind::Psi] {
            let c = build_cutoff(kind, AuditRadii::from_radius(2.0), &g).unwrap();
            let h = g.dr();
            for i in 1..g.len() - 1 {
                let r = g.r(i);
                let d2 = (c.values[i + 1] - 2.0 * c.values[i] + c.values[i - 1]) / (h * h);
                let d1 = (c.values[i + 1] - c.values[i - 1]) / (2.0 * h);
                let fd = d2 + 2.0 * d1 / r;
                // only C² at the joins, so the second difference is first order there
                assert!((fd - c.laplacian[i]).abs() < 10.0 * h, "{kind:?} at r = {r}");
            }
        }
    }

    #[test]
    fn rejects_bad_radii() {
        let g = grid();
        let bad = AuditRadii {
            radius: 2.0,
            r1: 4.0,
            r2: 3.0,
        };
        assert!(build_cutoff(CutoffKind::Phi, bad, &g).is_err());
        assert!(build_cutoff(CutoffKind::Psi, AuditRadii::from_radius(6.0), &g).is_err());
    }
}
