use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::econ::{Coefficients, CostTable};
use crate::error::{Error, Result};
use crate::jamgrid::Scenario;
use crate::textsim::{InterceptorProfile, NetworkProbSet, TextingModel, TransmissionMode};

pub const DEFAULT_TRIALS: u64 = 1000;
pub const DEFAULT_SEED: u64 = 42;

/// Everything a run needs. Every field is optional in the JSON document and
/// falls back to the reference experiment; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub network_sets: Vec<NetworkProbSet>,
    pub interceptor: InterceptorProfile,
    pub modes: Vec<TransmissionMode>,
    pub coefficients: Coefficients,
    pub cost_table: CostTable,
    pub n_trials: u64,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            network_sets: NetworkProbSet::defaults(),
            interceptor: InterceptorProfile::default(),
            modes: TransmissionMode::defaults(),
            coefficients: Coefficients::default(),
            cost_table: CostTable::default(),
            n_trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            out_dir: PathBuf::from("results"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.texting_model()?;
        self.coefficients.validate()?;
        self.cost_table.validate()?;
        if self.n_trials == 0 {
            return Err(Error::config("n_trials", "must be at least 1"));
        }
        Ok(())
    }

    pub fn texting_model(&self) -> Result<TextingModel> {
        TextingModel::new(&self.network_sets, &self.interceptor, &self.modes)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| Error::ConfigParse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 over the compact JSON form with `out_dir` blanked, so the same
    /// experiment hashes identically wherever it is written.
    pub fn sha256_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut canonical = self.clone();
        canonical.out_dir = PathBuf::new();
        let bytes = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::from_json(&text)
}
