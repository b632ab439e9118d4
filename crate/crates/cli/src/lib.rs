//! Scenario-driven front end for `robertson-core`.
//!
//! Scenarios are JSON files describing one computation each; running them
//! yields report records with the computed outputs and every check applied.

pub mod builtins;
pub mod report;
pub mod runner;
pub mod scenario;

pub use report::{to_csv, to_json, Check, Report, ReportRecord};
pub use runner::{run_batch, run_scenario, RunError};
pub use scenario::{parse_scenarios, Format, ScenarioConfig, ScenarioKind, SchemaError};
