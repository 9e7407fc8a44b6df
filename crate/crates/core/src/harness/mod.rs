//! Named experiments, sweeps and report emission.

mod emit;
mod run;
mod scenario;
mod sweep;

pub use emit::{read_rows_json, write_rows_csv, write_rows_json, ResultRow};
pub use run::{individual_secrecy_probe, run_scenario, Report, CEILING_SLACK_NATS};
pub use scenario::{preset, preset_names, Profile, Scenario};
pub use sweep::{default_jobs, sweep_alpha, CellFailure, SweepResult, SweepSpec};
