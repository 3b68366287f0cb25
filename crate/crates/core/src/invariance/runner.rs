use serde::Serialize;

use crate::dynamics::{IntegratorConfig, Scheme, Stepper};
use crate::error::{Error, Result};
use crate::noise::{generate_path_noise, sample_white_noise, LinearKind, NoiseStreams};
use crate::spectral::{MultiplierOp, SpectralField, TorusGrid};
use crate::stats::{chi_squared_sf, kolmogorov_p_value, ks_statistic, normal_two_sided_p};

use super::ensemble::{run_blocked, EnsembleStats};

/// Which flow the ensemble evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flow {
    Full,
    Kdv,
    Ou,
    Split,
}

#[derive(Debug, Clone)]
pub struct InvarianceOptions {
    /// Keep per-mode |c|^2 samples for the distributional KS verdicts.
    pub collect_raw: bool,
    /// Family-wise significance of the Bonferroni verdict.
    pub family_alpha: f64,
    /// Quadratic coefficient of the flow.
    pub coefficient: f64,
    pub blowup_ceiling: f64,
    pub block: u64,
}

impl Default for InvarianceOptions {
    fn default() -> Self {
        Self {
            collect_raw: true,
            family_alpha: 1e-3,
            coefficient: -1.0,
            blowup_ceiling: 1e6,
            block: 256,
        }
    }
}

/// Per-mode verdicts of one invariance run. Moment deviations are in units
/// of standard error; the targets are E[a] = E[b] = 0, E[a^2] = E[b^2] = 1/2,
/// E[ab] = 0.
#[derive(Debug, Clone, Serialize)]
pub struct ModeReport {
    pub mode: usize,
    pub z_mean_a: f64,
    pub z_mean_b: f64,
    pub z_var_a: f64,
    pub z_var_b: f64,
    pub z_cov_ab: f64,
    /// KS p-value of 2|c_n|^2 against chi-squared(2), when raw samples
    /// were collected.
    pub ks_p: Option<f64>,
    /// All moment deviations within 4 SE.
    pub within_4se: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub flow: Flow,
    pub n_max: usize,
    pub t_end: f64,
    pub dt: f64,
    pub paths: u64,
    pub blowups: u64,
    /// More than 0.1% of paths blew up: the verdict is void.
    pub invalidated: bool,
    /// phi = Id, the regime of the invariance claim.
    pub claim_regime: bool,
    pub modes: Vec<ModeReport>,
    /// No statistic fails the Bonferroni-corrected per-test level.
    pub family_pass: bool,
    pub worst_z: f64,
    /// Aggregate chi-squared p-value over the variance z-scores.
    pub aggregate_p: f64,
}

/// Evolve one path of the requested flow from white-noise initial data and
/// return the final state.
fn run_path(
    flow: Flow,
    grid: TorusGrid,
    phi: &MultiplierOp,
    t_end: f64,
    dt: f64,
    streams: &NoiseStreams,
    path: u64,
    opts: &InvarianceOptions,
) -> Result<SpectralField> {
    let u0 = sample_white_noise(grid, streams, path);
    let steps = (t_end / dt).round() as usize;
    match flow {
        Flow::Ou => {
            let noise = generate_path_noise(streams, path, phi, dt, steps, LinearKind::Dissipative, 0)?;
            let mut u = u0;
            let decay: Vec<f64> = (1..=grid.n_max())
                .map(|n| (-((n * n) as f64) * dt).exp())
                .collect();
            for step in 0..steps {
                for mode in 1..=grid.n_max() {
                    let c = u.coeff(mode as i64);
                    u.set_coeff(mode, decay[mode - 1] * c + noise.xi(step, mode));
                }
            }
            Ok(u)
        }
        Flow::Kdv => {
            let cfg = IntegratorConfig {
                blowup_ceiling: opts.blowup_ceiling,
                ..IntegratorConfig::new(dt, t_end).with_coefficient(opts.coefficient)
            };
            let mut stepper = Stepper::new(u0, phi, &cfg)?;
            for _ in 0..steps {
                stepper.step_kdv_only()?;
            }
            Ok(stepper.state().clone())
        }
        Flow::Full | Flow::Split => {
            let scheme = if flow == Flow::Full {
                Scheme::ExponentialEuler
            } else {
                Scheme::StrangSplit
            };
            let cfg = IntegratorConfig {
                scheme,
                blowup_ceiling: opts.blowup_ceiling,
                ..IntegratorConfig::new(dt, t_end).with_coefficient(opts.coefficient)
            };
            let noise = generate_path_noise(streams, path, phi, dt, steps, scheme.linear_kind(), 0)?;
            let mut stepper = Stepper::new(u0, phi, &cfg)?;
            for _ in 0..steps {
                stepper.step(&noise)?;
            }
            Ok(stepper.state().clone())
        }
    }
}

struct BlockOutput {
    stats: EnsembleStats,
    raw: Vec<Vec<f64>>,
}

/// Monte Carlo invariance test: draw white-noise data, evolve to t_end,
/// and compare the final per-mode moments (and distribution) against the
/// initial law.
pub fn invariance_test(
    flow: Flow,
    grid: TorusGrid,
    phi: &MultiplierOp,
    t_end: f64,
    dt: f64,
    paths: u64,
    seed: u64,
    opts: &InvarianceOptions,
) -> Result<InvarianceReport> {
    if paths == 0 {
        return Err(Error::InvalidParameter("need at least one path".into()));
    }
    let streams = NoiseStreams::new(seed);
    let n_max = grid.n_max();
    let zero_block = || BlockOutput {
        stats: EnsembleStats::new(n_max),
        raw: vec![Vec::new(); if opts.collect_raw { n_max } else { 0 }],
    };
    let merged = run_blocked(
        paths,
        opts.block,
        |range| {
            let mut out = zero_block();
            for p in range {
                match run_path(flow, grid, phi, t_end, dt, &streams, p, opts) {
                    Ok(u) => {
                        out.stats.accumulate(&u);
                        if opts.collect_raw {
                            for mode in 1..=n_max {
                                out.raw[mode - 1].push(u.coeff(mode as i64).norm_sqr());
                            }
                        }
                    }
                    Err(Error::Blowup { .. }) => out.stats.record_blowup(),
                    Err(e) => panic!("path {p} failed: {e}"),
                }
            }
            out
        },
        |acc: &mut BlockOutput, part| {
            acc.stats.merge(&part.stats);
            for (dst, src) in acc.raw.iter_mut().zip(part.raw) {
                dst.extend(src);
            }
        },
        zero_block(),
    );
    summarize(flow, t_end, dt, paths, phi, merged, opts)
}

fn summarize(
    flow: Flow,
    t_end: f64,
    dt: f64,
    paths: u64,
    phi: &MultiplierOp,
    merged: BlockOutput,
    opts: &InvarianceOptions,
) -> Result<InvarianceReport> {
    let stats = &merged.stats;
    let n_max = stats.n_max();
    let blowups = stats.blowups();
    let invalidated = (blowups as f64) > 0.001 * paths as f64;
    let mut modes = Vec::with_capacity(n_max);
    let mut z_values = Vec::new();
    let mut chi2_sum = 0.0;
    let mut chi2_dof = 0usize;
    for n in 1..=n_max {
        let z_mean_a = safe_z(stats.mean_a(n), 0.0, stats.se_mean_a(n));
        let z_mean_b = safe_z(stats.mean_b(n), 0.0, stats.se_mean_b(n));
        let z_var_a = safe_z(stats.mean_a2(n), 0.5, stats.se_mean_a2(n));
        let z_var_b = safe_z(stats.mean_b2(n), 0.5, stats.se_mean_b2(n));
        // SE of mean(ab) under the product law: sqrt(E[a^2] E[b^2] / P).
        let se_ab = (stats.mean_a2(n) * stats.mean_b2(n) / stats.count() as f64).sqrt();
        let z_cov_ab = safe_z(stats.mean_ab(n), 0.0, se_ab);
        chi2_sum += z_var_a * z_var_a + z_var_b * z_var_b;
        chi2_dof += 2;
        let ks_p = if opts.collect_raw {
            let mut samples = merged.raw[n - 1].clone();
            samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // 2|c|^2 ~ chi-squared(2) = Exp(mean 2).
            let d = ks_statistic(
                &samples.iter().map(|&x| 2.0 * x).collect::<Vec<_>>(),
                |x| 1.0 - (-x / 2.0).exp(),
            );
            Some(kolmogorov_p_value(samples.len(), d))
        } else {
            None
        };
        let zs = [z_mean_a, z_mean_b, z_var_a, z_var_b, z_cov_ab];
        z_values.extend_from_slice(&zs);
        let within_4se = zs.iter().all(|z| z.abs() <= 4.0);
        modes.push(ModeReport {
            mode: n,
            z_mean_a,
            z_mean_b,
            z_var_a,
            z_var_b,
            z_cov_ab,
            ks_p,
            within_4se,
        });
    }
    // Family-wise Bonferroni verdict over all moment statistics and KS
    // p-values.
    let mut m_tests = z_values.len();
    if opts.collect_raw {
        m_tests += n_max;
    }
    let per_test_alpha = opts.family_alpha / m_tests as f64;
    let mut family_pass = z_values
        .iter()
        .all(|&z| normal_two_sided_p(z) >= per_test_alpha);
    if opts.collect_raw {
        family_pass &= modes
            .iter()
            .all(|m| m.ks_p.map_or(true, |p| p >= per_test_alpha));
    }
    let worst_z = z_values.iter().fold(0.0f64, |acc, z| acc.max(z.abs()));
    let aggregate_p = chi_squared_sf(chi2_dof as f64, chi2_sum);
    Ok(InvarianceReport {
        flow,
        n_max,
        t_end,
        dt,
        paths,
        blowups,
        invalidated,
        claim_regime: phi.symbols().iter().all(|m| (m.re - 1.0).abs() < 1e-15 && m.im == 0.0),
        modes,
        family_pass: family_pass && !invalidated,
        worst_z,
        aggregate_p,
    })
}

fn safe_z(value: f64, target: f64, se: f64) -> f64 {
    if se == 0.0 {
        0.0
    } else {
        (value - target) / se
    }
}

/// One refinement level's moment summary.
#[derive(Debug, Clone, Serialize)]
pub struct RefinementLevel {
    pub dt: f64,
    /// Aggregate deviation of this level's second moments from the
    /// refinement limit, sqrt(sum_stats (m_level - m_extrapolated)^2).
    /// Levels share one Brownian path per sample, so the common Monte Carlo
    /// noise cancels in this difference and what remains is the
    /// discretization bias.
    pub aggregate_deviation: f64,
    /// Aggregate deviation from the invariant values sqrt(sum (m - 1/2)^2);
    /// noise-floor dominated at large path counts.
    pub raw_deviation: f64,
    pub worst_var_z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinementReport {
    pub flow: Flow,
    pub n_max: usize,
    pub t_end: f64,
    pub paths: u64,
    pub levels: Vec<RefinementLevel>,
    /// Deviations decrease monotonically as dt decreases.
    pub monotone: bool,
    /// Per-mode z-scores of the per-path Richardson extrapolation to dt=0.
    pub extrapolated_worst_z: f64,
    pub extrapolated_within_4se: bool,
    pub blowups: u64,
}

/// Invariance under dt-refinement with common Brownian paths: every level
/// is driven by the same underlying fine-level noise, so the level-to-level
/// differences isolate the discretization bias from Monte Carlo noise.
/// `dts` must be decreasing with each a dyadic multiple of the last.
pub fn invariance_refinement(
    flow: Flow,
    grid: TorusGrid,
    phi: &MultiplierOp,
    t_end: f64,
    dts: &[f64],
    paths: u64,
    seed: u64,
    opts: &InvarianceOptions,
) -> Result<RefinementReport> {
    if dts.len() < 2 {
        return Err(Error::InvalidParameter("need at least two dt levels".into()));
    }
    let dt_fine = dts[dts.len() - 1];
    let mut refine_levels = Vec::with_capacity(dts.len());
    for &dt in dts {
        let ratio = dt / dt_fine;
        let level = ratio.log2().round() as u32;
        if (ratio - (1u64 << level) as f64).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "dt levels must be dyadic multiples of the finest".into(),
            ));
        }
        refine_levels.push(level);
    }
    let scheme = match flow {
        Flow::Full => Scheme::ExponentialEuler,
        Flow::Split => Scheme::StrangSplit,
        _ => {
            return Err(Error::InvalidParameter(
                "refinement study applies to the discretized flows".into(),
            ))
        }
    };
    let streams = NoiseStreams::new(seed);
    let n_max = grid.n_max();
    let n_levels = dts.len();
    // Least-squares weights for the linear-in-dt extrapolation to dt = 0.
    let extrap = extrapolation_weights(dts);

    struct Block {
        // Per level, per mode: running sums of a^2 and b^2.
        level_sums: Vec<Vec<f64>>,
        // Extrapolated per-path stats: mean/var accumulators per mode pair.
        extrap_stats: Vec<crate::stats::RunningStats>,
        blowups: u64,
        count: u64,
    }
    let zero_block = |levels: usize, modes: usize| Block {
        level_sums: vec![vec![0.0; 2 * modes]; levels],
        extrap_stats: vec![crate::stats::RunningStats::default(); 2 * modes],
        blowups: 0,
        count: 0,
    };
    let merged = run_blocked(
        paths,
        opts.block,
        |range| {
            let mut block = zero_block(n_levels, n_max);
            'paths: for p in range {
                let u0 = sample_white_noise(grid, &streams, p);
                let mut per_level = vec![vec![0.0; 2 * n_max]; n_levels];
                for (li, (&dt, &refine)) in dts.iter().zip(&refine_levels).enumerate() {
                    let steps = (t_end / dt).round() as usize;
                    let noise = match generate_path_noise(
                        &streams,
                        p,
                        phi,
                        dt,
                        steps,
                        scheme.linear_kind(),
                        refine,
                    ) {
                        Ok(n) => n,
                        Err(_) => {
                            block.blowups += 1;
                            continue 'paths;
                        }
                    };
                    let cfg = IntegratorConfig {
                        scheme,
                        blowup_ceiling: opts.blowup_ceiling,
                        ..IntegratorConfig::new(dt, t_end).with_coefficient(opts.coefficient)
                    };
                    let mut stepper = match Stepper::new(u0.clone(), phi, &cfg) {
                        Ok(s) => s,
                        Err(_) => {
                            block.blowups += 1;
                            continue 'paths;
                        }
                    };
                    let mut failed = false;
                    for _ in 0..steps {
                        if stepper.step(&noise).is_err() {
                            failed = true;
                            break;
                        }
                    }
                    if failed {
                        block.blowups += 1;
                        continue 'paths;
                    }
                    for mode in 1..=n_max {
                        let c = stepper.state().coeff(mode as i64);
                        per_level[li][mode - 1] = c.re * c.re;
                        per_level[li][n_max + mode - 1] = c.im * c.im;
                    }
                }
                block.count += 1;
                for (li, lv) in per_level.iter().enumerate() {
                    for (k, v) in lv.iter().enumerate() {
                        block.level_sums[li][k] += v;
                    }
                }
                for k in 0..2 * n_max {
                    let y: f64 = per_level
                        .iter()
                        .zip(&extrap)
                        .map(|(lv, w)| lv[k] * w)
                        .sum();
                    block.extrap_stats[k].push(y);
                }
            }
            block
        },
        |acc: &mut Block, part| {
            acc.blowups += part.blowups;
            acc.count += part.count;
            for (a, b) in acc.level_sums.iter_mut().zip(&part.level_sums) {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            for (a, b) in acc.extrap_stats.iter_mut().zip(&part.extrap_stats) {
                a.merge(b);
            }
        },
        zero_block(n_levels, n_max),
    );
    if merged.count == 0 {
        return Err(Error::InvalidParameter("all paths failed".into()));
    }
    let count = merged.count as f64;
    let levels: Vec<RefinementLevel> = dts
        .iter()
        .enumerate()
        .map(|(li, &dt)| {
            let mut dev_sq = 0.0;
            let mut raw_sq = 0.0;
            let mut worst: f64 = 0.0;
            for k in 0..2 * n_max {
                let mean = merged.level_sums[li][k] / count;
                let limit = merged.extrap_stats[k].mean();
                dev_sq += (mean - limit) * (mean - limit);
                raw_sq += (mean - 0.5) * (mean - 0.5);
                // Reuse the extrapolated SE scale for a rough z (the level
                // SEs are comparable).
                let se = merged.extrap_stats[k].standard_error().max(1e-300);
                worst = worst.max(((mean - 0.5) / se).abs());
            }
            RefinementLevel {
                dt,
                aggregate_deviation: dev_sq.sqrt(),
                raw_deviation: raw_sq.sqrt(),
                worst_var_z: worst,
            }
        })
        .collect();
    let monotone = levels
        .windows(2)
        .all(|w| w[1].aggregate_deviation <= w[0].aggregate_deviation + 1e-15);
    let mut extrapolated_worst_z: f64 = 0.0;
    for s in &merged.extrap_stats {
        extrapolated_worst_z = extrapolated_worst_z.max(s.z_score(0.5).abs());
    }
    Ok(RefinementReport {
        flow,
        n_max,
        t_end,
        paths,
        levels,
        monotone,
        extrapolated_worst_z,
        extrapolated_within_4se: extrapolated_worst_z <= 4.0,
        blowups: merged.blowups,
    })
}

/// Weights w_l with sum w_l = 1 and sum w_l dt_l = 0 (least-squares linear
/// fit evaluated at dt = 0).
fn extrapolation_weights(dts: &[f64]) -> Vec<f64> {
    let n = dts.len() as f64;
    let mean: f64 = dts.iter().sum::<f64>() / n;
    let sxx: f64 = dts.iter().map(|&d| (d - mean) * (d - mean)).sum();
    dts.iter()
        .map(|&d| 1.0 / n - mean * (d - mean) / sxx)
        .collect()
}
