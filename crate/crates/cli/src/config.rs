//! JSON run configuration.

use std::path::{Path, PathBuf};

use adjtele_core::observer::{ObserverModel, PopulationParams};
use adjtele_core::session::{BlockConfig, ExperimentConfig};
use adjtele_core::staircase::{StaircaseConfig, ThresholdPooling};
use adjtele_core::RangeKind;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    #[serde(default = "default_participants")]
    pub n_participants: u32,
    #[serde(default)]
    pub block: BlockSettings,
    #[serde(default)]
    pub staircase: StaircaseSettings,
    #[serde(default)]
    pub population: PopulationSpec,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn default_participants() -> u32 {
    32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlockSettings {
    pub training_trials: usize,
    pub catch_trials: usize,
    pub catch_pass_fraction: f64,
    pub max_trials: usize,
    pub zone_radius: f64,
}

impl Default for BlockSettings {
    fn default() -> Self {
        let b = BlockConfig::for_range(RangeKind::Small);
        BlockSettings {
            training_trials: b.training_trials,
            catch_trials: b.catch_trials,
            catch_pass_fraction: b.catch_pass_fraction,
            max_trials: b.max_trials,
            zone_radius: b.zone_radius,
        }
    }
}

/// Staircase parameters shared by both ranges; the ceiling follows the range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaircaseSettings {
    pub start_upper: f64,
    pub start_lower: f64,
    pub base_step: f64,
    pub reversals_to_converge: usize,
    pub reversals_to_average: usize,
    pub quick_start: bool,
    pub stimulus_floor: f64,
    pub pooling: ThresholdPooling,
}

impl Default for StaircaseSettings {
    fn default() -> Self {
        let s = StaircaseConfig::default();
        StaircaseSettings {
            start_upper: s.start_upper,
            start_lower: s.start_lower,
            base_step: s.base_step,
            reversals_to_converge: s.reversals_to_converge,
            reversals_to_average: s.reversals_to_average,
            quick_start: s.quick_start,
            stimulus_floor: s.stimulus_floor,
            pooling: s.pooling,
        }
    }
}

impl StaircaseSettings {
    pub fn for_range(&self, range: RangeKind) -> StaircaseConfig {
        StaircaseConfig {
            start_upper: self.start_upper,
            start_lower: self.start_lower,
            base_step: self.base_step,
            reversals_to_converge: self.reversals_to_converge,
            reversals_to_average: self.reversals_to_average,
            quick_start: self.quick_start,
            stimulus_floor: self.stimulus_floor,
            stimulus_ceiling: range.max_adjustment(),
            pooling: self.pooling,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PopulationSpec {
    /// Between-subject population (defaults reproduce the reported means).
    Sampled(PopulationParams),
    /// Every participant is the same observer.
    Fixed(ObserverModel),
    /// Participants cycle through this list by index.
    Roster(Vec<ObserverModel>),
}

impl Default for PopulationSpec {
    fn default() -> Self {
        PopulationSpec::Sampled(PopulationParams::default())
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        RunConfig::from_json(&text)
    }

    pub fn experiment(&self) -> ExperimentConfig {
        let make = |range: RangeKind| BlockConfig {
            range,
            zone_radius: self.block.zone_radius,
            training_trials: self.block.training_trials,
            catch_trials: self.block.catch_trials,
            catch_pass_fraction: self.block.catch_pass_fraction,
            max_trials: self.block.max_trials,
            staircase: self.staircase.for_range(range),
        };
        ExperimentConfig { small: make(RangeKind::Small), large: make(RangeKind::Large) }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let field = |field: &'static str, message: String| CliError::ConfigField { field, message };
        if self.n_participants == 0 {
            return Err(field("n_participants", "must be at least 1".into()));
        }
        let exp = self.experiment();
        exp.small.staircase.validate().map_err(|e| field("staircase", e.to_string()))?;
        exp.small.validate().map_err(|e| field("block", e.to_string()))?;
        exp.large.validate().map_err(|e| field("block", e.to_string()))?;
        match &self.population {
            PopulationSpec::Sampled(p) => p.validate().map_err(|e| field("population", e.to_string()))?,
            PopulationSpec::Fixed(o) => o.validate().map_err(|e| field("population", e.to_string()))?,
            PopulationSpec::Roster(list) => {
                if list.is_empty() {
                    return Err(field("population", "roster must not be empty".into()));
                }
                for o in list {
                    o.validate().map_err(|e| field("population", e.to_string()))?;
                }
            }
        }
        Ok(())
    }
}
