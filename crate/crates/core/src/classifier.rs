use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functionals::static_norms;
use crate::functionals::{integrate_radial, Region};
use crate::grid::RadialGrid;
use crate::state::FieldState;

/// Payne–Sattinger label of a data pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    /// `E < h₀` and `K ≥ 0`
    #[serde(rename = "PS_plus")]
    PsPlus,
    /// `E < h₀` and `K < 0`
    #[serde(rename = "PS_minus")]
    PsMinus,
    /// `E ≥ h₀`
    NotCovered,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::PsPlus => "PS_plus",
            Label::PsMinus => "PS_minus",
            Label::NotCovered => "NotCovered",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: Label,
    pub energy: f64,
    pub nehari: f64,
    pub h0: f64,
}

impl Classification {
    pub fn energy_ratio(&self) -> f64 {
        self.energy / self.h0
    }
}

/// Applies the comparisons literally: `E < h₀` strict, `K ≥ 0` weak.
pub fn label_for(energy: f64, nehari: f64, h0: f64) -> Label {
    if !(energy < h0) {
        Label::NotCovered
    } else if nehari >= 0.0 {
        Label::PsPlus
    } else {
        Label::PsMinus
    }
}

/// Classifies the data `(u₀, u₁)` carried by `state`.
pub fn classify(state: &FieldState, h0: f64, grid: &RadialGrid) -> Result<Classification> {
    let (l2, grad2, l4) = static_norms(state, grid)?;
    let ut2: Vec<f64> = state.ut(grid).iter().map(|x| x * x).collect();
    let kinetic = integrate_radial(&ut2, grid, Region::ALL)?;
    let energy = 0.5 * (kinetic + grad2 + l2) - 0.25 * l4;
    let nehari = grad2 + l2 - l4;
    Ok(Classification {
        label: label_for(energy, nehari, h0),
        energy,
        nehari,
        h0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_cases_follow_the_symbols() {
        assert_eq!(label_for(0.0, 0.0, 1.0), Label::PsPlus);
        assert_eq!(label_for(1.0, 5.0, 1.0), Label::NotCovered);
        assert_eq!(label_for(0.999, -1e-300, 1.0), Label::PsMinus);
        assert_eq!(label_for(f64::NAN, 1.0, 1.0), Label::NotCovered);
    }

    #[test]
    fn zero_data_is_ps_plus() {
        let g = RadialGrid::new(20.0, 401).unwrap();
        let c = classify(&FieldState::zero(&g), 18.9, &g).unwrap();
        assert_eq!(c.label, Label::PsPlus);
        assert_eq!(c.energy, 0.0);
        assert_eq!(c.nehari, 0.0);
    }

    #[test]
    fn non_finite_data_is_rejected() {
        let g = RadialGrid::new(20.0, 401).unwrap();
        let mut s = FieldState::zero(&g);
        s.v[3] = f64::NAN;
        assert!(classify(&s, 1.0, &g).is_err());
    }
}
