//! Scenario-driven front end for the characteristic-cone analysis library:
//! configuration parsing, deterministic execution and report artifacts.

pub mod jsonfmt;
pub mod report;
pub mod runner;
pub mod sampling;
pub mod scenario;

pub use report::{Artifacts, Report};
pub use runner::{execute, RunOutcome};
pub use scenario::{ConfigError, Mode, Scenario};
