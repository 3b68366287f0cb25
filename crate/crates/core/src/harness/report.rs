use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::run::Manifest;

/// Aggregate a completed run directory into a report document plus
/// plot-ready tidy series. Requires the manifest written by `run`.
pub fn report(dir: &Path) -> Result<String> {
    let manifest_path = dir.join("manifest.json");
    if !manifest_path.exists() {
        return Err(Error::InvalidParameter(format!(
            "missing manifest: {}",
            manifest_path.display()
        )));
    }
    let manifest: Manifest = serde_json::from_slice(&fs::read(&manifest_path)?)
        .map_err(|e| Error::InvalidParameter(format!("manifest unreadable: {e}")))?;

    let mut doc = String::new();
    writeln!(doc, "# Report: {} ({})", manifest.kind, manifest.config_hash).unwrap();
    writeln!(doc).unwrap();
    writeln!(doc, "- seed: {}", manifest.seed).unwrap();
    writeln!(doc, "- version: {}", manifest.crate_version).unwrap();
    writeln!(doc, "- files: {}", manifest.files.join(", ")).unwrap();
    writeln!(doc).unwrap();

    let mut records = 0usize;
    let tidy_dir = dir.join("tidy");
    fs::create_dir_all(&tidy_dir)?;
    for file in &manifest.files {
        let path = dir.join(file);
        if file.ends_with(".csv") && path.exists() {
            let text = fs::read_to_string(&path)?;
            let rows = text.lines().count().saturating_sub(1);
            records += rows;
            writeln!(doc, "## {file}").unwrap();
            writeln!(doc, "{rows} records.").unwrap();
            // Tidy projection: identical payload under tidy/ for plotting
            // pipelines that consume one directory.
            fs::write(tidy_dir.join(file), text.as_bytes())?;
            writeln!(doc).unwrap();
        }
    }
    if let Some(summary) = manifest.files.iter().find(|f| f.as_str() == "summary.md") {
        let text = fs::read_to_string(dir.join(summary))?;
        writeln!(doc, "## Run summary").unwrap();
        writeln!(doc).unwrap();
        doc.push_str(&text);
    }
    if records == 0 {
        writeln!(doc, "No tabular records were produced by this run.").unwrap();
    }
    fs::write(dir.join("report.md"), doc.as_bytes())?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::ExperimentConfig;
    use crate::harness::run::run;

    #[test]
    fn report_requires_manifest() {
        let dir = std::env::temp_dir().join("skdvb-report-empty");
        fs::create_dir_all(&dir).unwrap();
        assert!(report(&dir).is_err());
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn zero_horizon_simulate_writes_single_snapshot() {
        let dir = std::env::temp_dir().join("skdvb-t0-run");
        fs::remove_dir_all(&dir).ok();
        let text = format!(
            r#"
kind = "simulate"
[grid]
n_max = 4
[time]
dt = 1e-2
t_end = 0.0
[dynamics]
store_states = true
[output]
dir = "{}"
"#,
            dir.display()
        );
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        run(&cfg).unwrap();
        assert!(dir.join("manifest.json").exists());
        let csv = fs::read_to_string(dir.join("trajectory.csv")).unwrap();
        assert_eq!(csv.lines().count(), 2, "header plus the single record");
        let (_, _, _, snaps) =
            crate::harness::io::read_snapshots(&dir.join("snapshots.bin")).unwrap();
        assert_eq!(snaps.len(), 1);
        assert_eq!(snaps[0].0, 0.0);
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn smoke_preset_completes_within_budget() {
        // The reduced invariance preset (N = 8, 1e3 paths) must finish well
        // under a minute on desktop hardware.
        let dir = std::env::temp_dir().join("skdvb-smoke-budget");
        fs::remove_dir_all(&dir).ok();
        let mut cfg = crate::harness::preset("full-invariance-smoke").unwrap();
        cfg.output.dir = Some(dir.clone());
        let started = std::time::Instant::now();
        let artifacts = run(&cfg).unwrap();
        let elapsed = started.elapsed();
        assert!(
            elapsed.as_secs_f64() < 60.0,
            "smoke preset took {elapsed:?}"
        );
        assert_eq!(artifacts.passed, Some(true));
        assert!(dir.join("invariance.json").exists());
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn report_summarizes_a_small_run() {
        let dir = std::env::temp_dir().join("skdvb-report-run");
        fs::remove_dir_all(&dir).ok();
        let text = format!(
            r#"
kind = "simulate"
[grid]
n_max = 4
[time]
dt = 1e-2
t_end = 0.1
[output]
dir = "{}"
"#,
            dir.display()
        );
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        run(&cfg).unwrap();
        let doc = report(&dir).unwrap();
        assert!(doc.contains("trajectory.csv"));
        assert!(dir.join("tidy").join("trajectory.csv").exists());
        fs::remove_dir_all(&dir).ok();
    }
}
