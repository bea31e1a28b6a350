//! Optional TOML configuration for the command-line tool. Command-line
//! flags override file values.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::abstraction::LearnConfig;
use crate::runtime::{FAIR_K, WINDOW};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Seed for every randomized step.
    pub seed: Option<u64>,
    pub learn: LearnConfig,
    pub repair_enum: EnumSection,
    pub repair_synth: SynthSection,
    pub simulate: SimulateSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnumSection {
    pub n_skills: usize,
    pub max: Option<usize>,
    pub budget_secs: Option<f64>,
}

impl Default for EnumSection {
    fn default() -> Self {
        EnumSection { n_skills: 1, max: None, budget_secs: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub extra_skills: usize,
    pub max: Option<usize>,
    pub budget_secs: Option<f64>,
    pub legacy: bool,
}

impl Default for SynthSection {
    fn default() -> Self {
        SynthSection { extra_skills: 3, max: None, budget_secs: None, legacy: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    pub steps: usize,
    pub fair_k: usize,
    pub window: usize,
}

impl Default for SimulateSection {
    fn default() -> Self {
        SimulateSection { steps: 1000, fair_k: FAIR_K, window: WINDOW }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Config> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c = Config::from_toml("seed = 7\n[repair_synth]\nmax = 2\n[learn]\nmin_samples = 5\n").unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.repair_synth.max, Some(2));
        assert_eq!(c.repair_synth.extra_skills, 3);
        assert_eq!(c.learn.min_samples, 5);
        assert_eq!(c.simulate.window, WINDOW);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(Config::from_toml("[simulate]\nstep = 3\n").is_err());
    }
}
