//! Scenario runner: configuration parsing, the canonical scenario suite and
//! CSV/report output.

mod config;
mod scenario;

pub use config::{list_scenarios, parse_config, ConfigError, ScenarioConfig, ScenarioName};
pub use scenario::{
    run_scenario, Check, RunError, RunReport, DIAGNOSTICS_HEADER, EVENTS_HEADER, SLICES_HEADER,
};
