//! Experiment driver: strategy registry, sweeps, bound checks, replay and
//! interactive play.

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::{GoalKind, MakerStrategy};
use crate::maker::connectivity::ConnectivityMaker;
use crate::maker::greedy_pm::GreedyPmMaker;
use crate::maker::hnf::{HnfConfig, HnfMaker};
use crate::maker::hs::{HsConfig, HsMaker};
use crate::maker::hvs::{HvsConfig, HvsMaker};
use crate::maker::pm::{PmConfig, PmMaker};
use crate::degree_game::MinDegreeMaker;
use crate::transcript::TranscriptError;

pub mod bounds;
pub mod config;
pub mod interactive;
pub mod replay;
pub mod sweep;

pub use bounds::{bound_check, BoundReport, BoundSpec};
pub use config::{ExperimentConfig, Preset};
pub use sweep::{run_sweep, SweepRow};

/// Environment variable holding the number of sweep workers.
pub const WORKERS_ENV: &str = "MB_WORKERS";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Transcript(#[from] TranscriptError),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }
}

pub const MAKERS: [&str; 7] = ["conn", "pm", "greedy_pm", "hnf", "hvs", "hs", "mindeg"];

/// The goal a Maker plays for unless the config says otherwise.
pub fn default_goal(maker: &str) -> Option<GoalKind> {
    Some(match maker {
        "conn" => GoalKind::Connectivity,
        "pm" | "greedy_pm" => GoalKind::PerfectMatching,
        "hnf" | "hvs" | "hs" => GoalKind::HamiltonCycle,
        "mindeg" => GoalKind::MinDegree(1),
        _ => return None,
    })
}

/// A Maker with its resolved configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct MakerSpec {
    pub name: String,
    pub preset: Preset,
    /// Key overrides applied on top of the preset.
    pub overrides: toml::Table,
}

impl MakerSpec {
    pub fn new(name: &str, preset: Preset) -> Self {
        MakerSpec {
            name: name.into(),
            preset,
            overrides: toml::Table::new(),
        }
    }

    /// The strategy config after overrides, as TOML; empty for makers
    /// without one.
    pub fn resolved(&self) -> Result<String, HarnessError> {
        let desk = self.preset == Preset::Desk;
        match self.name.as_str() {
            "pm" => render(&merged(if desk { PmConfig::desk() } else { PmConfig::default() }, &self.overrides)?),
            "hnf" => render(&merged(if desk { HnfConfig::desk() } else { HnfConfig::default() }, &self.overrides)?),
            "hvs" => render(&merged(if desk { HvsConfig::desk() } else { HvsConfig::default() }, &self.overrides)?),
            "hs" => render(&merged(if desk { HsConfig::desk() } else { HsConfig::default() }, &self.overrides)?),
            "conn" | "greedy_pm" | "mindeg" => {
                if self.overrides.is_empty() {
                    Ok(String::new())
                } else {
                    Err(HarnessError::Config(format!("maker {} takes no options", self.name)))
                }
            }
            other => Err(HarnessError::Config(format!("unknown maker {other:?}"))),
        }
    }

    /// SHA-256 of the maker name, preset and resolved config.
    pub fn config_hash(&self) -> Result<String, HarnessError> {
        let mut h = Sha256::new();
        h.update(self.name.as_bytes());
        h.update([0]);
        h.update(self.preset.name().as_bytes());
        h.update([0]);
        h.update(self.resolved()?.as_bytes());
        Ok(hex::encode(h.finalize()))
    }

    pub fn build(&self, n: usize, b: usize, goal: GoalKind) -> Result<Box<dyn MakerStrategy>, HarnessError> {
        let desk = self.preset == Preset::Desk;
        let refused = |e: crate::maker::MakerError| HarnessError::Config(e.to_string());
        Ok(match self.name.as_str() {
            "conn" => Box::new(ConnectivityMaker::new()),
            "greedy_pm" => Box::new(GreedyPmMaker::new()),
            "mindeg" => match goal {
                GoalKind::MinDegree(c) => Box::new(MinDegreeMaker::new(c)),
                g => return Err(HarnessError::Config(format!("maker mindeg needs a MINDEG goal, got {g}"))),
            },
            "pm" => {
                let cfg = merged(if desk { PmConfig::desk() } else { PmConfig::default() }, &self.overrides)?;
                Box::new(PmMaker::new(cfg, n, b).map_err(refused)?)
            }
            "hnf" => Box::new(HnfMaker::new(merged(
                if desk { HnfConfig::desk() } else { HnfConfig::default() },
                &self.overrides,
            )?)),
            "hvs" => {
                let cfg = merged(if desk { HvsConfig::desk() } else { HvsConfig::default() }, &self.overrides)?;
                Box::new(HvsMaker::new(cfg, n, b).map_err(refused)?)
            }
            "hs" => {
                let cfg = merged(if desk { HsConfig::desk() } else { HsConfig::default() }, &self.overrides)?;
                Box::new(HsMaker::new(cfg, n, b).map_err(refused)?)
            }
            other => return Err(HarnessError::Config(format!("unknown maker {other:?}"))),
        })
    }
}

fn render<T: Serialize>(cfg: &T) -> Result<String, HarnessError> {
    toml::to_string(cfg).map_err(|e| HarnessError::Config(e.to_string()))
}

/// `base` with the keys of `overrides` replaced, nested tables merged.
/// Unknown keys are rejected by the config types themselves.
pub fn merged<T: Serialize + DeserializeOwned>(base: T, overrides: &toml::Table) -> Result<T, HarnessError> {
    let mut table = toml::Table::try_from(&base).map_err(|e| HarnessError::Config(e.to_string()))?;
    merge_into(&mut table, overrides);
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| HarnessError::Config(e.to_string()))
}

fn merge_into(base: &mut toml::Table, over: &toml::Table) {
    for (k, v) in over {
        match (base.get_mut(k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge_into(b, o),
            _ => {
                base.insert(k.clone(), v.clone());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_merge_and_reject_typos() {
        let mut spec = MakerSpec::new("pm", Preset::Desk);
        spec.overrides = toml::from_str("delta = 0.2\n[hnf]\nmin_degree = 4\n").unwrap();
        let cfg: PmConfig = merged(PmConfig::desk(), &spec.overrides).unwrap();
        assert_eq!(cfg.delta, 0.2);
        assert_eq!(cfg.hnf.min_degree, 4);
        assert_eq!(cfg.hnf.cap_factor, 14.0);
        spec.overrides = toml::from_str("delt = 0.2").unwrap();
        assert!(spec.build(100, 1, GoalKind::PerfectMatching).is_err());
    }

    #[test]
    fn hash_depends_on_config() {
        let a = MakerSpec::new("hvs", Preset::Desk);
        let b = MakerSpec::new("hvs", Preset::Paper);
        assert_ne!(a.config_hash().unwrap(), b.config_hash().unwrap());
        assert_eq!(a.config_hash().unwrap(), a.clone().config_hash().unwrap());
        assert_eq!(a.config_hash().unwrap().len(), 64);
    }

    #[test]
    fn every_maker_builds() {
        for m in MAKERS {
            let goal = default_goal(m).unwrap();
            let spec = MakerSpec::new(m, Preset::Desk);
            let b = if m == "hvs" { 2 } else { 1 };
            assert!(spec.build(200, b, goal).is_ok(), "{m}");
        }
        assert!(MakerSpec::new("nope", Preset::Desk).build(10, 1, GoalKind::Connectivity).is_err());
    }
}
