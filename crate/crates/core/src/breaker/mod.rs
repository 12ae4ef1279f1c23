//! Breaker strategies: the clique delay strategies and the adversary pool.

use std::fmt;
use std::str::FromStr;

use crate::board::{Edge, GameState};
use crate::engine::BreakerStrategy;

pub mod clique;
pub mod pool;

pub use clique::{delay_batch_size, CliqueBreaker, CliqueMode};
pub use pool::{PoolBreaker, PoolKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BreakerKind {
    Pool(PoolKind),
    Clique(CliqueMode),
}

impl BreakerKind {
    pub const POOL: [BreakerKind; 5] = [
        BreakerKind::Pool(PoolKind::Random),
        BreakerKind::Pool(PoolKind::EndpointGreedy),
        BreakerKind::Pool(PoolKind::BoxEmulating),
        BreakerKind::Pool(PoolKind::PairDestroyer),
        BreakerKind::Clique(CliqueMode::Hc),
    ];

    /// Pool breakers draw their filler edges from a seeded generator.
    pub fn is_randomized(self) -> bool {
        matches!(self, BreakerKind::Pool(_))
    }

    pub fn build(self, b: usize, seed: u64) -> Box<dyn BreakerStrategy> {
        match self {
            BreakerKind::Pool(k) => Box::new(PoolBreaker::new(k, seed)),
            BreakerKind::Clique(m) => Box::new(CliqueBreaker::new(m, b)),
        }
    }
}

impl fmt::Display for BreakerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BreakerKind::Pool(k) => write!(f, "{}", k.name()),
            BreakerKind::Clique(m) => write!(f, "{}", m.name()),
        }
    }
}

impl FromStr for BreakerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PoolKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .map(|&k| BreakerKind::Pool(k))
            .or_else(|| [CliqueMode::Pm, CliqueMode::Hc].into_iter().find(|m| m.name() == s).map(BreakerKind::Clique))
            .ok_or_else(|| format!("unknown breaker {s:?}"))
    }
}

/// Lowest free edges avoiding the vertices marked in `avoid`, then any free
/// edges, until `out` holds `want` edges.
pub(crate) fn fill_lowest(state: &GameState, avoid: &[bool], out: &mut Vec<Edge>, want: usize) {
    for pass in 0..2 {
        for e in state.free_edges() {
            if out.len() >= want {
                return;
            }
            let (u, v) = e.endpoints();
            if pass == 0 && (avoid[u] || avoid[v]) {
                continue;
            }
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
}
