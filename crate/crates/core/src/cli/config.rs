//! The TOML run configuration.
//!
//! ```toml
//! seed = 7
//!
//! [target]            # benchmark circuit for generate/run
//! width = 3
//! layers = 1
//! edge_probability = 0.5
//! weights = { low = 0.0, high = 1.0 }
//! # circuit_file = "my_circuit.txt"   # use a circuit file instead
//!
//! [noise]
//! family = "S"        # S, H, S+H, H-2Q, none, depolarizing
//!
//! [sampling]
//! samples_per_ensemble = 100
//! mode = "exact"      # or "shots"
//! shots = 1000
//! bootstrap_resamples = 1000
//!
//! [validate]
//! widths = [3, 4, 5]
//! layers = [1, 2, 5]
//! circuits_per_point = 10
//! families = ["S", "H", "S+H", "H-2Q"]
//! samples_per_ensemble = 300
//! bootstrap_resamples = 200
//! ```
//!
//! Every section is optional. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bench::{ExperimentConfig, SimMode, WeightRange};
use crate::error::{Error, Result};
use crate::estimator::MIN_RESAMPLES;
use crate::simulator::{Family, SIM_LIMIT};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub target: TargetConfig,
    pub noise: NoiseConfig,
    pub sampling: SamplingConfig,
    pub validate: ValidateConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 1,
            target: TargetConfig::default(),
            noise: NoiseConfig::default(),
            sampling: SamplingConfig::default(),
            validate: ValidateConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TargetConfig {
    pub width: usize,
    pub layers: usize,
    pub edge_probability: f64,
    pub weights: WeightRange,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit_file: Option<PathBuf>,
}

impl Default for TargetConfig {
    fn default() -> Self {
        Self {
            width: 3,
            layers: 1,
            edge_probability: 0.5,
            weights: WeightRange::default(),
            circuit_file: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub family: Family,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { family: Family::S }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Exact,
    Shots,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    pub samples_per_ensemble: usize,
    pub mode: ModeName,
    pub shots: u64,
    pub bootstrap_resamples: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            samples_per_ensemble: 100,
            mode: ModeName::Exact,
            shots: 1000,
            bootstrap_resamples: 1000,
        }
    }
}

impl SamplingConfig {
    pub fn sim_mode(&self) -> SimMode {
        match self.mode {
            ModeName::Exact => SimMode::Exact,
            ModeName::Shots => SimMode::Shots(self.shots),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateConfig {
    pub widths: Vec<usize>,
    pub layers: Vec<usize>,
    pub circuits_per_point: usize,
    pub families: Vec<Family>,
    pub samples_per_ensemble: usize,
    pub bootstrap_resamples: usize,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        let e = ExperimentConfig::default();
        Self {
            widths: e.widths,
            layers: e.layers,
            circuits_per_point: e.circuits_per_point,
            families: e.families,
            samples_per_ensemble: e.samples_per_ensemble,
            bootstrap_resamples: e.bootstrap_resamples,
        }
    }
}

fn field(name: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{name}: {msg}"))
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text)
            .map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Field-level validation beyond what the types enforce.
    pub fn check(&self) -> Result<()> {
        let t = &self.target;
        if t.circuit_file.is_none() && !(2..=SIM_LIMIT).contains(&t.width) {
            return Err(field(
                "target.width",
                format!("must be in 2..={SIM_LIMIT}, got {}", t.width),
            ));
        }
        if t.layers == 0 {
            return Err(field("target.layers", "must be positive"));
        }
        if !(0.0..=1.0).contains(&t.edge_probability) {
            return Err(field("target.edge_probability", "must lie in [0, 1]"));
        }
        if !(t.weights.low <= t.weights.high) {
            return Err(field("target.weights", "low must not exceed high"));
        }
        let s = &self.sampling;
        if s.samples_per_ensemble == 0 {
            return Err(field("sampling.samples_per_ensemble", "must be positive"));
        }
        if s.mode == ModeName::Shots && s.shots == 0 {
            return Err(field("sampling.shots", "must be positive"));
        }
        if s.bootstrap_resamples < MIN_RESAMPLES {
            return Err(field(
                "sampling.bootstrap_resamples",
                format!("must be at least {MIN_RESAMPLES}"),
            ));
        }
        self.experiment(SimMode::Exact)
            .validate()
            .map_err(|e| match e {
                Error::InvalidArgument(m) => field("validate", m),
                other => other,
            })
    }

    /// The validation sweep described by this config.
    pub fn experiment(&self, mode: SimMode) -> ExperimentConfig {
        let v = &self.validate;
        ExperimentConfig {
            seed: self.seed,
            widths: v.widths.clone(),
            layers: v.layers.clone(),
            circuits_per_point: v.circuits_per_point,
            families: v.families.clone(),
            samples_per_ensemble: v.samples_per_ensemble,
            mode,
            edge_probability: self.target.edge_probability,
            weights: self.target.weights,
            bootstrap_resamples: v.bootstrap_resamples,
        }
    }
}
