//! Monte Carlo tests of white-noise invariance for the OU block, the KdV
//! block, and the full truncated flow, a generator-pairing test against the
//! truncated white-noise law, the Ito energy balance, and moment audits.

mod energy;
mod ensemble;
mod generator;
mod moments;
mod polynomial;
mod runner;

pub use energy::{energy_balance, CheckpointStat, EnergyBalanceReport};
pub use ensemble::{run_blocked, EnsembleStats};
pub use generator::{
    field_to_vars, generator_apply, generator_battery, generator_pairing, BatteryEntry,
    GeneratorPart,
};
pub use moments::{moment_growth_audit, MomentAuditReport};
pub use polynomial::{battery, TestFunctionPoly, MAX_DEGREE};
pub use runner::{
    invariance_refinement, invariance_test, Flow, InvarianceOptions, InvarianceReport, ModeReport,
    RefinementLevel, RefinementReport,
};
