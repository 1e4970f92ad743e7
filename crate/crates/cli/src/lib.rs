//! Configuration, orchestration, and export behind the `kawactl` binary.

pub mod config;
pub mod run;
pub mod verify;

pub use config::{resolve, ConfigError, ExperimentConfig, Mode, RawConfig};
pub use run::{demo_state, run, Outcome, RunError, RunOptions};
pub use verify::{run_suite, Check, VerifyReport};
