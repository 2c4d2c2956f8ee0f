use serde::{Deserialize, Serialize};

use super::trapezoid;
use crate::error::{Error, Result};
use crate::evolution::RunSeries;
use crate::functionals::{Ball, FunctionalRecord, Shell};

/// One space-time estimate `LHS ≤ C·bracket`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub lhs: f64,
    pub bracket: f64,
    /// `LHS/bracket`
    pub constant: Option<f64>,
    /// `LHS/(ε·bracket)` for the ε-weighted estimates
    pub eps_constant: Option<f64>,
}

impl Estimate {
    fn new(lhs: f64, bracket: f64, eps: Option<f64>) -> Self {
        let quotient = |d: f64| (d > 0.0).then(|| lhs / d);
        Self {
            lhs,
            bracket,
            constant: quotient(bracket),
            eps_constant: eps.and_then(|e| quotient(e * bracket)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lhs.is_finite()
            && self.bracket.is_finite()
            && self.constant.is_none_or(f64::is_finite)
            && self.eps_constant.is_none_or(f64::is_finite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorawetzReport {
    /// `E_L(0)`
    pub epsilon: f64,
    pub t_final: f64,
    /// `∬_{|x|≤2R} u⁴` against `∬_{|x|≤4R} u² + ∬_{2R≤|x|≤4R} |∇u|²`
    pub interior_u4: Estimate,
    /// `∬_{|x|≤2R} |∇u|²` against `A + E(T) + ∬_{|x|≤4R} u² + ∬_{2R≤|x|≤4R} |∇u|²`
    pub interior_gradient: Estimate,
    /// `∬_{|x|≥2R} u⁴` against `∬_{|x|≤2R} u² + ∬_{|x|≥2R} |∇u|²`
    pub exterior_u4: Estimate,
    /// `∬_{|x|≥2R} (|∇u|² + u²)` against `A + E(T) + ∬_{|x|≤2R} u² + ε∬_{R≤|x|≤2R} |∇u|²`
    pub exterior_h1: Estimate,
}

impl MorawetzReport {
    pub fn estimates(&self) -> [(&'static str, &Estimate); 4] {
        [
            ("interior_u4", &self.interior_u4),
            ("interior_gradient", &self.interior_gradient),
            ("exterior_u4", &self.exterior_u4),
            ("exterior_h1", &self.exterior_h1),
        ]
    }
}

pub fn morawetz_report(series: &RunSeries) -> Result<MorawetzReport> {
    if !series.outcome.is_global() {
        return Err(Error::validation(
            "morawetz",
            "estimates need a global run; this one blew up",
        ));
    }
    let (first, last) = match (series.records.first(), series.records.last()) {
        (Some(f), Some(l)) if series.len() >= 2 => (f, l),
        _ => return Err(Error::validation("morawetz", "need at least two samples")),
    };
    let times: Vec<f64> = series.times().collect();
    let over = |f: &dyn Fn(&FunctionalRecord) -> f64| {
        let v: Vec<f64> = series.records.iter().map(f).collect();
        trapezoid(&times, &v)
    };
    let eps = first.linear_energy;
    let decrement = *series.decrement.last().unwrap();
    let energy = last.energy;

    let u4_in_2r = over(&|r| r.ball(Ball::TwoR).u4_inside);
    let u4_out_2r = over(&|r| r.ball(Ball::TwoR).u4_outside);
    let grad_in_2r = over(&|r| r.ball(Ball::TwoR).grad2_inside);
    let h1_out_2r = over(&|r| r.ball(Ball::TwoR).h1_outside());
    let grad_out_2r = over(&|r| r.ball(Ball::TwoR).grad2_outside);
    let u2_in_2r = over(&|r| r.ball(Ball::TwoR).u2_inside);
    let u2_in_4r = over(&|r| r.ball(Ball::FourR).u2_inside);
    let grad_2r_4r = over(&|r| r.shell(Shell::TwoRToFourR).grad2);
    let grad_r_2r = over(&|r| r.shell(Shell::RToTwoR).grad2);

    let interior = u2_in_4r + grad_2r_4r;
    Ok(MorawetzReport {
        epsilon: eps,
        t_final: last.t,
        interior_u4: Estimate::new(u4_in_2r, interior, Some(eps)),
        interior_gradient: Estimate::new(grad_in_2r, decrement + energy + interior, None),
        exterior_u4: Estimate::new(u4_out_2r, u2_in_2r + grad_out_2r, Some(eps)),
        exterior_h1: Estimate::new(
            h1_out_2r,
            decrement + energy + u2_in_2r + eps * grad_r_2r,
            None,
        ),
    })
}
