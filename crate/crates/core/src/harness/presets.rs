//! Canned configurations, one per acceptance gate, named by what they test.

use super::config::ExperimentConfig;

/// Preset names in a stable order.
pub fn preset_names() -> Vec<&'static str> {
    vec![
        "energy-balance",
        "ou-invariance",
        "kdv-invariance",
        "full-invariance",
        "full-invariance-smoke",
        "stochastic-convolution",
        "contraction",
        "bilinear-sweep",
        "lemma-checks",
        "moment-audit",
    ]
}

/// Look up a preset configuration by name.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let text = match name {
        // Ensemble-mean d||u||^2/dt against the dissipation/injection
        // balance at five checkpoints.
        "energy-balance" => {
            r#"
kind = "simulate"
[grid]
n_max = 32
[phi]
power = 1.0
[time]
dt = 1e-4
t_end = 1.0
[ensemble]
paths = 1000
seed = 2001
[energy]
checkpoints = 5
"#
        }
        // Exact per-mode stationarity of the dissipative block.
        "ou-invariance" => {
            r#"
kind = "invariance"
[grid]
n_max = 16
[phi]
power = 0.0
[time]
dt = 1.0
t_end = 1.0
[ensemble]
paths = 100000
seed = 2002
[invariance]
flow = "ou"
"#
        }
        // L2-conserving dispersive block, white-noise moments preserved.
        "kdv-invariance" => {
            r#"
kind = "invariance"
[grid]
n_max = 8
[phi]
power = 0.0
[time]
dt = 1e-3
t_end = 1.0
[ensemble]
paths = 10000
seed = 2003
[invariance]
flow = "kdv"
"#
        }
        // Full flow with dt-refinement and extrapolated moments.
        "full-invariance" => {
            r#"
kind = "invariance"
[grid]
n_max = 8
[phi]
power = 0.0
[time]
dt = 1e-3
t_end = 1.0
[ensemble]
paths = 10000
seed = 2004
[invariance]
flow = "full"
refinement_dts = [1e-3, 5e-4, 2.5e-4]
"#
        }
        // Single-dt smoke variant sized to finish within a minute.
        "full-invariance-smoke" => {
            r#"
kind = "invariance"
[grid]
n_max = 8
[phi]
power = 0.0
[time]
dt = 1e-3
t_end = 1.0
[ensemble]
paths = 1000
seed = 2005
[invariance]
flow = "full"
"#
        }
        // Per-mode law of the stochastic convolution and the linear-in-T
        // growth of its restricted norm (run through the mild machinery's
        // path sampler inside the acceptance suite; the preset covers the
        // moment-audit style growth fit).
        "stochastic-convolution" => {
            r#"
kind = "moment-audit"
[grid]
n_max = 16
[phi]
power = 0.83
[time]
dt = 1e-3
t_end = 1.0
[ensemble]
paths = 1000
seed = 2006
"#
        }
        // Stopping time + Picard contraction over random draws.
        "contraction" => {
            r#"
kind = "mild"
[grid]
n_max = 16
[phi]
power = 0.83
[time]
dt = 1.953125e-3
t_end = 0.25
[ensemble]
paths = 1
seed = 2007
[xsb]
s = -0.55
epsilon = 0.05
gamma = 0.05
[mild]
draws = 100
t_max = 0.25
calibration_samples = 100
"#
        }
        // Random-field ratio sweep with truncation doubling.
        "bilinear-sweep" => {
            r#"
kind = "bilinear"
[grid]
n_max = 32
[time]
dt = 1.5625e-2
t_end = 1.0
[ensemble]
paths = 1
seed = 2008
[xsb]
s = -0.55
epsilon = 0.05
gamma = 0.05
samples = 1000
j_len = 64
n_max_doubled = 64
"#
        }
        // The three calculus-inequality probes plus the time-gain slopes.
        "lemma-checks" => {
            r#"
kind = "lemma-check"
[grid]
n_max = 8
[time]
dt = 1e-2
t_end = 1.0
[ensemble]
paths = 1
seed = 2009
"#
        }
        // Running-sup moment growth under smoothed noise.
        "moment-audit" => {
            r#"
kind = "moment-audit"
[grid]
n_max = 16
[phi]
power = 1.0
[time]
dt = 1e-3
t_end = 1.0
[ensemble]
paths = 1000
seed = 2010
[moment]
u0_norm = 1.0
"#
        }
        _ => return None,
    };
    Some(ExperimentConfig::from_toml(text).expect("preset parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_parse_and_validate() {
        for name in preset_names() {
            let cfg = preset(name).unwrap_or_else(|| panic!("missing preset {name}"));
            cfg.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(preset("no-such-preset").is_none());
    }
}
