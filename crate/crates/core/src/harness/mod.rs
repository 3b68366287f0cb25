//! Experiment configuration, runners, persistence, and report generation.

pub mod config;
pub mod io;
mod presets;
mod report;
mod run;

pub use config::{ExperimentConfig, ExperimentKind};
pub use presets::{preset, preset_names};
pub use report::report;
pub use run::{run, run_generator_battery, Manifest, RunArtifacts};
