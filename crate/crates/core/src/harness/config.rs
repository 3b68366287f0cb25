use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::Scheme;
use crate::error::{Error, Result};
use crate::invariance::Flow;
use crate::noise::PhiSpec;

/// Experiment selector. Every run kind consumes the shared sections plus
/// its own block below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    Invariance,
    Bilinear,
    Mild,
    LemmaCheck,
    MomentAudit,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Invariance => "invariance",
            ExperimentKind::Bilinear => "bilinear",
            ExperimentKind::Mild => "mild",
            ExperimentKind::LemmaCheck => "lemma-check",
            ExperimentKind::MomentAudit => "moment-audit",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConfig {
    pub n_max: usize,
    /// Collocation points; omitted means the dealiased default.
    pub m_phys: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub paths: u64,
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self { paths: 1, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DynamicsConfig {
    pub scheme: Scheme,
    pub coefficient: f64,
    pub blowup_ceiling: f64,
    pub record_stride: usize,
    pub store_states: bool,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::ExponentialEuler,
            coefficient: -1.0,
            blowup_ceiling: 1e6,
            record_stride: 1,
            store_states: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct InvarianceConfig {
    pub flow: Flow,
    /// Optional dt-refinement levels (descending, dyadic multiples of the
    /// finest); the shared time.dt is ignored when present.
    pub refinement_dts: Option<Vec<f64>>,
    pub collect_raw: bool,
    pub family_alpha: f64,
}

impl Default for InvarianceConfig {
    fn default() -> Self {
        Self {
            flow: Flow::Full,
            refinement_dts: None,
            collect_raw: true,
            family_alpha: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct XsbConfig {
    pub s: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub pad: usize,
    /// Samples of the bilinear sweep.
    pub samples: usize,
    /// Time nodes of the sweep lattice.
    pub j_len: usize,
    /// Second truncation of the sweep stability comparison.
    pub n_max_doubled: Option<usize>,
}

impl Default for XsbConfig {
    fn default() -> Self {
        Self {
            s: -0.55,
            epsilon: 0.05,
            gamma: 0.05,
            pad: 4,
            samples: 1000,
            j_len: 64,
            n_max_doubled: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MildConfig {
    /// Number of random (data, path) draws.
    pub draws: usize,
    /// Search bound of the local existence time.
    pub t_max: f64,
    pub calibration_samples: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for MildConfig {
    fn default() -> Self {
        Self {
            draws: 100,
            t_max: 0.25,
            calibration_samples: 100,
            max_iterations: 60,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct LemmaConfig {
    pub kernel_n: Vec<i64>,
    pub kernel_s: f64,
    pub kernel_epsilon: f64,
    pub supsum_delta: f64,
    pub supsum_n1: Vec<i64>,
    pub supsum_n_values: Vec<i64>,
    pub conv_delta1: f64,
    pub conv_delta2: f64,
    pub conv_a: Vec<f64>,
    pub gain_b: Vec<f64>,
    pub gain_samples: usize,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self {
            kernel_n: vec![128, 256],
            kernel_s: -0.5,
            kernel_epsilon: 0.05,
            supsum_delta: 0.6,
            supsum_n1: vec![1000, 2000],
            supsum_n_values: vec![1, 2, 4, 8, 16],
            conv_delta1: 0.94,
            conv_delta2: 0.98,
            conv_a: vec![0.0, 10.0, 100.0, 1000.0],
            gain_b: vec![0.3, 0.4, 0.45],
            gain_samples: 6,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MomentConfig {
    /// L^2 norm the white-noise initial draw is scaled to; 0 means zero
    /// initial data.
    pub u0_norm: f64,
}

impl Default for MomentConfig {
    fn default() -> Self {
        Self { u0_norm: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct EnergyConfig {
    /// Checkpoint windows of the energy-balance ensemble (0 = no energy
    /// accounting, plain trajectory run).
    pub checkpoints: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct OutputConfig {
    /// Output directory; defaults under the output root.
    pub dir: Option<PathBuf>,
    pub csv: Option<bool>,
    pub json: Option<bool>,
}

/// Full experiment description. The schema is the contract: names, types
/// and defaults as declared here; unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub grid: GridConfig,
    pub phi: Option<PhiSpec>,
    pub time: TimeConfig,
    #[serde(default)]
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub dynamics: DynamicsConfig,
    #[serde(default)]
    pub invariance: InvarianceConfig,
    #[serde(default)]
    pub xsb: XsbConfig,
    #[serde(default)]
    pub mild: MildConfig,
    #[serde(default)]
    pub lemma: LemmaConfig,
    #[serde(default)]
    pub moment: MomentConfig,
    #[serde(default)]
    pub energy: EnergyConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config {
            path: e
                .span()
                .map(|s| format!("bytes {}..{}", s.start, s.end))
                .unwrap_or_else(|| "<root>".into()),
            message: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |path: &str, message: &str| {
            Err(Error::Config {
                path: path.into(),
                message: message.into(),
            })
        };
        if self.grid.n_max == 0 {
            return fail("grid.n_max", "must be >= 1");
        }
        if let Some(m) = self.grid.m_phys {
            if m < 2 * self.grid.n_max + 1 {
                return fail("grid.m_phys", "must be >= 2 n_max + 1");
            }
        }
        if !(self.time.dt > 0.0) {
            return fail("time.dt", "must be positive");
        }
        if self.time.t_end < 0.0 {
            return fail("time.t_end", "must be >= 0");
        }
        if let Some(PhiSpec::Table { table }) = &self.phi {
            if table.len() != self.grid.n_max {
                return fail("phi.table", "length must equal grid.n_max");
            }
        }
        match self.kind {
            ExperimentKind::Invariance => {
                if self.ensemble.paths == 0 {
                    return fail("ensemble.paths", "must be >= 1");
                }
                if let Some(dts) = &self.invariance.refinement_dts {
                    if dts.len() < 2 {
                        return fail("invariance.refinement_dts", "need at least two levels");
                    }
                }
            }
            ExperimentKind::Bilinear => {
                if self.xsb.samples == 0 {
                    return fail("xsb.samples", "must be >= 1");
                }
                if !(self.xsb.epsilon > 0.0 && self.xsb.epsilon < 1.0 / 16.0) {
                    return fail("xsb.epsilon", "must lie in (0, 1/16)");
                }
            }
            ExperimentKind::Mild => {
                if !(self.xsb.epsilon > 0.0 && self.xsb.epsilon < 1.0 / 16.0) {
                    return fail("xsb.epsilon", "must lie in (0, 1/16)");
                }
                if self.mild.draws == 0 {
                    return fail("mild.draws", "must be >= 1");
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The torus grid this config resolves to.
    pub fn torus_grid(&self) -> Result<crate::spectral::TorusGrid> {
        match self.grid.m_phys {
            Some(m) => crate::spectral::TorusGrid::new(self.grid.n_max, m),
            None => crate::spectral::TorusGrid::dealiased(self.grid.n_max),
        }
    }

    /// The smoothing operator (zero when no noise is configured).
    pub fn phi_operator(&self) -> Result<crate::spectral::MultiplierOp> {
        match &self.phi {
            Some(spec) => spec.build(self.grid.n_max),
            None => Ok(crate::spectral::MultiplierOp::zero(self.grid.n_max)),
        }
    }
}
