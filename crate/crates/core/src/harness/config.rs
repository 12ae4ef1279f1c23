//! Sweep configuration files (TOML).
//!
//! ```toml
//! maker = "pm"
//! preset = "desk"            # or "paper"
//! goal = "PM"                # optional; PM, HC, CONN or MINDEG:c
//! n = [100, 200]
//! b = [1, "2..4", "1..pm_limit"]
//! breakers = ["pool"]        # or names: random, endpoint_greedy, ...
//! seeds = [0, 1, 2]          # or `repetitions = 3`
//! move_cap = 100000          # optional
//! monitors = true
//! bound = "PM_upper"         # optional
//! csv = "out/pm.csv"         # optional
//! transcripts = "out/pm"     # optional directory
//!
//! [maker_config]
//! delta = 0.1
//! ```
//!
//! `pm_limit` is `max(1, ⌊δn/(100 ln n)⌋)` with `δ` from the maker config
//! (0.1 when the maker has none).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{default_goal, BoundSpec, HarnessError, MakerSpec};
use crate::breaker::BreakerKind;
use crate::engine::GoalKind;
use crate::maker::pm::bias_limit;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Paper,
    #[default]
    Desk,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Paper => "paper",
            Preset::Desk => "desk",
        }
    }
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            _ => Err(format!("unknown preset {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BiasEntry {
    Value(usize),
    Formula(String),
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    maker: String,
    #[serde(default)]
    preset: Preset,
    goal: Option<String>,
    n: Vec<usize>,
    b: Vec<BiasEntry>,
    #[serde(default = "default_breakers")]
    breakers: Vec<String>,
    seeds: Option<Vec<u64>>,
    repetitions: Option<u64>,
    move_cap: Option<usize>,
    #[serde(default = "yes")]
    monitors: bool,
    bound: Option<String>,
    csv: Option<PathBuf>,
    transcripts: Option<PathBuf>,
    #[serde(default)]
    maker_config: toml::Table,
}

fn default_breakers() -> Vec<String> {
    vec!["pool".into()]
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub maker: MakerSpec,
    pub goal: GoalKind,
    pub n: Vec<usize>,
    pub b: Vec<BiasEntry>,
    pub breakers: Vec<BreakerKind>,
    pub seeds: Vec<u64>,
    pub move_cap: Option<usize>,
    pub monitors: bool,
    pub bound: Option<BoundSpec>,
    pub csv: Option<PathBuf>,
    pub transcripts: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(maker: MakerSpec, goal: GoalKind, n: Vec<usize>, b: Vec<usize>, breakers: Vec<BreakerKind>, seeds: Vec<u64>) -> Self {
        ExperimentConfig {
            maker,
            goal,
            n,
            b: b.into_iter().map(BiasEntry::Value).collect(),
            breakers,
            seeds,
            move_cap: None,
            monitors: true,
            bound: None,
            csv: None,
            transcripts: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let goal = match &raw.goal {
            Some(g) => g.parse().map_err(HarnessError::Config)?,
            None => default_goal(&raw.maker)
                .ok_or_else(|| HarnessError::Config(format!("unknown maker {:?}", raw.maker)))?,
        };
        let mut breakers = Vec::new();
        for name in &raw.breakers {
            if name == "pool" {
                breakers.extend(BreakerKind::POOL);
            } else {
                breakers.push(name.parse().map_err(HarnessError::Config)?);
            }
        }
        let seeds = match (raw.seeds, raw.repetitions) {
            (Some(_), Some(_)) => return Err(HarnessError::Config("give either seeds or repetitions".into())),
            (Some(s), None) => s,
            (None, r) => (0..r.unwrap_or(1)).collect(),
        };
        let bound = raw.bound.as_deref().map(str::parse).transpose().map_err(HarnessError::Config)?;
        let cfg = ExperimentConfig {
            maker: MakerSpec {
                name: raw.maker,
                preset: raw.preset,
                overrides: raw.maker_config,
            },
            goal,
            n: raw.n,
            b: raw.b,
            breakers,
            seeds,
            move_cap: raw.move_cap,
            monitors: raw.monitors,
            bound,
            csv: raw.csv,
            transcripts: raw.transcripts,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n.is_empty() {
            return Err(HarnessError::Config("empty n list".into()));
        }
        if self.b.is_empty() {
            return Err(HarnessError::Config("empty b list".into()));
        }
        if self.breakers.is_empty() {
            return Err(HarnessError::Config("empty breaker list".into()));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::Config("no seeds".into()));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < 2) {
            return Err(HarnessError::Config(format!("n = {n} is too small")));
        }
        self.maker.resolved()?;
        for &n in &self.n {
            self.biases(n)?;
        }
        Ok(())
    }

    fn delta(&self) -> f64 {
        self.maker
            .overrides
            .get("delta")
            .and_then(|v| v.as_float())
            .unwrap_or(0.1)
    }

    /// The bias values for board order `n`, formulas evaluated, sorted and
    /// deduplicated.
    pub fn biases(&self, n: usize) -> Result<Vec<usize>, HarnessError> {
        let mut out = Vec::new();
        for entry in &self.b {
            match entry {
                BiasEntry::Value(b) => out.push(*b),
                BiasEntry::Formula(f) => {
                    let term = |s: &str| -> Result<usize, HarnessError> {
                        match s.trim() {
                            "pm_limit" => Ok(bias_limit(n, self.delta())),
                            t => t.parse().map_err(|_| HarnessError::Config(format!("bad bias term {t:?}"))),
                        }
                    };
                    match f.split_once("..") {
                        Some((lo, hi)) => out.extend(term(lo)?..=term(hi)?),
                        None => out.push(term(f)?),
                    }
                }
            }
        }
        if out.contains(&0) {
            return Err(HarnessError::Config(format!("bias 0 at n = {n}")));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_formulas_and_pool() {
        let c = ExperimentConfig::parse(
            "maker = \"pm\"\nn = [1000]\nb = [5, \"1..pm_limit\"]\nrepetitions = 2\n[maker_config]\ndelta = 0.2\n",
        )
        .unwrap();
        assert_eq!(c.goal, GoalKind::PerfectMatching);
        assert_eq!(c.breakers.len(), BreakerKind::POOL.len());
        assert_eq!(c.seeds, vec![0, 1]);
        // 0.2 * 1000 / (100 ln 1000) = 0.289 -> 1.
        assert_eq!(c.biases(1000).unwrap(), vec![1, 5]);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            "maker = \"pm\"\nn = [10]\nb = []\n",
            "maker = \"pm\"\nn = []\nb = [1]\n",
            "maker = \"pm\"\nn = [10]\nb = [1]\nextra = 3\n",
            "maker = \"zz\"\nn = [10]\nb = [1]\n",
            "maker = \"pm\"\nn = [10]\nb = [0]\n",
            "maker = \"pm\"\nn = [10]\nb = [\"x..2\"]\n",
            "maker = \"pm\"\nn = [10]\nb = [1]\nbreakers = [\"nobody\"]\n",
            "maker = \"pm\"\nn = [10]\nb = [1]\n[maker_config]\nunknown = 1\n",
        ];
        for text in bad {
            assert!(matches!(ExperimentConfig::parse(text), Err(HarnessError::Config(_))), "{text}");
        }
    }
}
