use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::csvio::{self, GRID_FILE, LOSSES_FILE, TEXTING_FILE};
use crate::econ::{aggregate_losses, LossRecord};
use crate::error::{Error, Result};
use crate::jamgrid::{sweep_grid, CellResult};
use crate::textsim::{TrialOutcome, RNG_ALGORITHM};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCounts {
    pub grid: u64,
    pub texting: u64,
    pub losses: u64,
}

/// Reproducibility record written next to the CSV files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub config_sha256: String,
    pub seed: u64,
    /// Crate version with the RNG derivation as build metadata.
    pub version: String,
    pub rows: RowCounts,
    pub duration_ms: u64,
}

pub fn tool_version() -> String {
    format!("{}+{}", env!("CARGO_PKG_VERSION"), RNG_ALGORITHM)
}

/// Creates `dir` if missing. Parents are not created, so a typo in a deep
/// path fails instead of scattering directories.
pub fn prepare_out_dir(dir: &Path) -> Result<()> {
    match fs::create_dir(dir) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == ErrorKind::AlreadyExists && dir.is_dir() => Ok(()),
        Err(e) => Err(Error::io(dir, e)),
    }
}

pub fn grid_stage(config: &RunConfig) -> Result<Vec<CellResult>> {
    sweep_grid(&config.scenario).map_err(|e| e.in_stage("grid"))
}

pub fn texting_stage(config: &RunConfig) -> Result<Vec<TrialOutcome>> {
    let model = config.texting_model().map_err(|e| e.in_stage("texting"))?;
    Ok(model.run_trials(config.n_trials, config.seed))
}

pub fn loss_stage(config: &RunConfig, outcomes: &[TrialOutcome]) -> Result<Vec<LossRecord>> {
    aggregate_losses(outcomes, &config.coefficients, &config.cost_table)
        .map_err(|e| e.in_stage("losses"))
}

fn out_path(config: &RunConfig, name: &str) -> PathBuf {
    config.out_dir.join(name)
}

pub fn write_grid(config: &RunConfig, rows: &[CellResult]) -> Result<PathBuf> {
    let path = out_path(config, GRID_FILE);
    csvio::write_grid(&path, rows).map_err(|e| e.in_stage("grid"))?;
    Ok(path)
}

pub fn write_texting(config: &RunConfig, outcomes: &[TrialOutcome]) -> Result<PathBuf> {
    let path = out_path(config, TEXTING_FILE);
    csvio::write_texting(&path, outcomes).map_err(|e| e.in_stage("texting"))?;
    Ok(path)
}

pub fn write_losses(config: &RunConfig, records: &[LossRecord]) -> Result<PathBuf> {
    let path = out_path(config, LOSSES_FILE);
    csvio::write_losses(&path, records).map_err(|e| e.in_stage("losses"))?;
    Ok(path)
}

/// Grid sweep, texting trials and loss aggregation, written to `out_dir`
/// together with `manifest.json`.
pub fn run_pipeline(config: &RunConfig) -> Result<RunManifest> {
    let started = Instant::now();
    config.validate()?;
    prepare_out_dir(&config.out_dir)?;

    let grid = grid_stage(config)?;
    write_grid(config, &grid)?;
    let outcomes = texting_stage(config)?;
    write_texting(config, &outcomes)?;
    let losses = loss_stage(config, &outcomes)?;
    write_losses(config, &losses)?;

    let manifest = RunManifest {
        config_sha256: config.sha256_hex(),
        seed: config.seed,
        version: tool_version(),
        rows: RowCounts {
            grid: grid.len() as u64,
            texting: outcomes.len() as u64,
            losses: losses.len() as u64,
        },
        duration_ms: started.elapsed().as_millis() as u64,
    };
    let path = out_path(config, MANIFEST_FILE);
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data_rows(path: &Path) -> u64 {
        fs::read_to_string(path).unwrap().lines().count() as u64 - 1
    }

    #[test]
    fn default_pipeline_writes_four_files() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            out_dir: dir.path().join("run"),
            ..RunConfig::default()
        };
        let m = run_pipeline(&config).unwrap();
        assert_eq!(
            m.rows,
            RowCounts {
                grid: 1024,
                texting: 6000,
                losses: 36
            }
        );
        assert_eq!(m.seed, 42);
        assert_eq!(data_rows(&config.out_dir.join(GRID_FILE)), m.rows.grid);
        assert_eq!(
            data_rows(&config.out_dir.join(TEXTING_FILE)),
            m.rows.texting
        );
        assert_eq!(data_rows(&config.out_dir.join(LOSSES_FILE)), m.rows.losses);
        let back: RunManifest =
            serde_json::from_str(&fs::read_to_string(config.out_dir.join(MANIFEST_FILE)).unwrap())
                .unwrap();
        assert_eq!(back, m);
        assert!(m.version.ends_with(RNG_ALGORITHM));
    }

    #[test]
    fn missing_parent_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            out_dir: dir.path().join("a").join("b"),
            n_trials: 5,
            ..RunConfig::default()
        };
        assert!(run_pipeline(&config).unwrap_err().is_io());
    }

    #[test]
    fn out_dir_that_is_a_file_is_io_error() {
        let file = tempfile::NamedTempFile::new().unwrap();
        let config = RunConfig {
            out_dir: file.path().to_path_buf(),
            n_trials: 5,
            ..RunConfig::default()
        };
        assert!(run_pipeline(&config).unwrap_err().is_io());
    }

    #[test]
    fn invalid_config_is_not_io() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            out_dir: dir.path().to_path_buf(),
            n_trials: 0,
            ..RunConfig::default()
        };
        let err = run_pipeline(&config).unwrap_err();
        assert!(!err.is_io());
    }
}
