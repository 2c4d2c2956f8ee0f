//! Command-line driver: configuration, artifacts, ground-state cache and sweeps.

pub mod cache;
pub mod commands;
pub mod error;
pub mod output;
pub mod settings;
pub mod sweep;

pub use commands::{cmd_audit, cmd_classify, cmd_ground_state, cmd_simulate, Context};
pub use error::{CliError, Result};
pub use settings::Settings;
pub use sweep::cmd_sweep;
