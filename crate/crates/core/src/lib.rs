//! Radial laboratory for the damped focusing cubic Klein–Gordon equation
//! `∂ₜₜu − Δu + α(x)∂ₜu + u = u³` on ℝ³.
//!
//! The crate simulates radial solutions with a three-level finite-difference
//! scheme, evaluates the energy functionals, computes the ground state `Q`,
//! and audits the energy, multiplier and Morawetz identities numerically.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod audit;
pub mod classifier;
pub mod config;
pub mod damping;
pub mod error;
pub mod evolution;
pub mod functionals;
pub mod grid;
pub mod ground_state;
mod smooth;
pub mod state;

pub use classifier::{classify, Classification, Label};
pub use config::{DataFamily, RunConfig};
pub use damping::{make_damping, DampingProfile, DampingShape, DampingSpec};
pub use error::{Error, Result};
pub use evolution::{run, Outcome, RunSeries, Stepper, StepperConfig};
pub use functionals::{evaluate_functionals, integrate_radial, AuditRadii, FunctionalRecord, Region};
pub use grid::{make_grid, RadialGrid};
pub use ground_state::{shoot_ground_state, verify_ground_state, GroundState};
pub use state::FieldState;
