use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::MultiplierOp;

/// Noise smoothing specification, as it appears in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiSpec {
    /// phi_n = |n|^{-beta}.
    Power { power: f64 },
    /// Explicit real table phi_1..phi_N.
    Table { table: Vec<f64> },
}

impl PhiSpec {
    pub fn power(beta: f64) -> Self {
        PhiSpec::Power { power: beta }
    }

    pub fn build(&self, n_max: usize) -> Result<MultiplierOp> {
        match self {
            PhiSpec::Power { power } => MultiplierOp::phi_power(*power, n_max),
            PhiSpec::Table { table } => MultiplierOp::phi_table(table, n_max),
        }
    }
}

/// phi_operator per the module contract: build the diagonal smoothing
/// operator for modes up to n_max.
pub fn phi_operator(spec: &PhiSpec, n_max: usize) -> Result<MultiplierOp> {
    spec.build(n_max)
}
