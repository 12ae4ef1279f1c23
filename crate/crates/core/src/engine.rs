//! Referee loop: alternates a Maker and a Breaker strategy on a board,
//! records the transcript and checks Maker's goal certificates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{BoardError, Edge, GameState, Player};
use crate::graph::Graph;
use crate::transcript::{MoveRecord, Transcript, TranscriptHeader};

/// Per-move numeric annotations (stage numbers, monitor inputs, ...).
pub type Notes = BTreeMap<String, f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GoalKind {
    PerfectMatching,
    HamiltonCycle,
    Connectivity,
    /// Minimum degree `c` in Maker's graph (the degree game).
    MinDegree(usize),
}

impl GoalKind {
    pub fn code(self) -> &'static str {
        match self {
            GoalKind::PerfectMatching => "PM",
            GoalKind::HamiltonCycle => "HC",
            GoalKind::Connectivity => "CONN",
            GoalKind::MinDegree(_) => "MINDEG",
        }
    }

    /// Size of the smallest winning set on `K_n`.
    pub fn smallest_winning_set(self, n: usize) -> usize {
        match self {
            GoalKind::PerfectMatching => n / 2,
            GoalKind::HamiltonCycle => n,
            GoalKind::Connectivity => n - 1,
            GoalKind::MinDegree(c) => (c * n).div_ceil(2),
        }
    }
}

impl fmt::Display for GoalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoalKind::MinDegree(c) => write!(f, "MINDEG:{c}"),
            g => f.write_str(g.code()),
        }
    }
}

impl FromStr for GoalKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PM" => Ok(GoalKind::PerfectMatching),
            "HC" => Ok(GoalKind::HamiltonCycle),
            "CONN" => Ok(GoalKind::Connectivity),
            _ => s
                .strip_prefix("MINDEG:")
                .and_then(|c| c.parse().ok())
                .map(GoalKind::MinDegree)
                .ok_or_else(|| format!("unknown goal {s:?}")),
        }
    }
}

/// The strategy cannot make its prescribed move and gives up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forfeit {
    pub stage: u32,
    pub reason: String,
}

impl Forfeit {
    pub fn new(stage: u32, reason: impl Into<String>) -> Self {
        Forfeit {
            stage,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Forfeit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage, self.reason)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MakerAction {
    Claim { edge: Edge, notes: Notes },
    Forfeit(Forfeit),
}

impl MakerAction {
    pub fn claim(edge: Edge) -> Self {
        MakerAction::Claim {
            edge,
            notes: Notes::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BreakerAction {
    Claim { edges: Vec<Edge>, notes: Notes },
    /// Give up the turn (interactive resignation).
    Pass,
}

impl BreakerAction {
    pub fn claim(edges: Vec<Edge>) -> Self {
        BreakerAction::Claim {
            edges,
            notes: Notes::new(),
        }
    }
}

pub trait MakerStrategy: Send {
    fn name(&self) -> String;

    /// Called on Maker's turn. The returned edge must be free; the strategy
    /// may assume it is applied.
    fn next_move(&mut self, state: &GameState) -> MakerAction;

    /// The winning structure, once the strategy has built it.
    fn certificate(&self, state: &GameState) -> Option<Vec<Edge>>;

    /// Summary statistics reported after the game.
    fn stats(&self) -> Notes {
        Notes::new()
    }
}

pub trait BreakerStrategy: Send {
    fn name(&self) -> String;

    /// Called on Breaker's turn; must return `min(b, free)` free edges.
    fn next_move(&mut self, state: &GameState) -> BreakerAction;
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    MakerWin,
    /// All edges claimed without a Maker win.
    BoardExhausted,
    Forfeit(Forfeit),
    CapReached,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    Maker,
    Breaker,
    Forfeit,
}

impl Outcome {
    pub fn winner(&self) -> Option<Winner> {
        match self {
            Outcome::MakerWin => Some(Winner::Maker),
            Outcome::BoardExhausted => Some(Winner::Breaker),
            Outcome::Forfeit(_) => Some(Winner::Forfeit),
            Outcome::CapReached => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::MakerWin => "Maker",
            Outcome::BoardExhausted => "Breaker",
            Outcome::Forfeit(_) => "Forfeit",
            Outcome::CapReached => "Cap",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GameResult {
    pub outcome: Outcome,
    pub maker_moves_used: usize,
    pub certificate: Option<Vec<Edge>>,
    pub transcript: Transcript,
    pub stats: Notes,
    pub final_state: GameState,
}

impl GameResult {
    pub fn maker_won(&self) -> bool {
        self.outcome == Outcome::MakerWin
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("{player} strategy made an illegal move at record {index} ({edges:?}): {source}")]
    IllegalStrategyMove {
        player: Player,
        index: usize,
        edges: Vec<Edge>,
        source: BoardError,
    },
    #[error("Maker certificate for {goal} failed verification at move {maker_moves}")]
    InvalidCertificate { goal: GoalKind, maker_moves: usize },
    #[error("invalid move cap {0}")]
    InvalidCap(usize),
}

#[derive(Clone, Debug, Default)]
pub struct PlayOptions {
    /// Maximum number of Maker moves; defaults to `C(n,2)`.
    pub move_cap: Option<usize>,
    pub seed: u64,
    pub config_hash: String,
}

/// Runs one game from `state` (usually fresh, possibly with a pre-claimed
/// forbidden graph) until Maker's certificate verifies, the board is full,
/// a strategy forfeits, or Maker reaches the move cap.
pub fn play(
    mut state: GameState,
    maker: &mut dyn MakerStrategy,
    breaker: &mut dyn BreakerStrategy,
    goal: GoalKind,
    opts: &PlayOptions,
) -> Result<GameResult, EngineError> {
    let cap = opts.move_cap.unwrap_or(state.total_pairs());
    if cap == 0 {
        return Err(EngineError::InvalidCap(cap));
    }
    let mut transcript = Transcript::new(TranscriptHeader {
        n: state.n(),
        b: state.bias(),
        goal,
        maker: maker.name(),
        breaker: breaker.name(),
        seed: opts.seed,
        config_hash: opts.config_hash.clone(),
        preclaimed: state.breaker_edges(),
    });
    let mut certificate = None;
    let outcome = loop {
        if state.free_count() == 0 {
            break Outcome::BoardExhausted;
        }
        let index = transcript.records.len();
        match state.turn() {
            Player::Breaker => match breaker.next_move(&state) {
                BreakerAction::Claim { edges, notes } => {
                    state.claim(Player::Breaker, &edges).map_err(|source| {
                        EngineError::IllegalStrategyMove {
                            player: Player::Breaker,
                            index,
                            edges: edges.clone(),
                            source,
                        }
                    })?;
                    transcript.push(MoveRecord::new(index, Player::Breaker, edges, notes));
                }
                BreakerAction::Pass => {
                    state.pass(Player::Breaker).expect("Breaker's turn");
                    let mut notes = Notes::new();
                    notes.insert("pass".into(), 1.0);
                    transcript.push(MoveRecord::new(index, Player::Breaker, Vec::new(), notes));
                }
            },
            Player::Maker => match maker.next_move(&state) {
                MakerAction::Forfeit(f) => break Outcome::Forfeit(f),
                MakerAction::Claim { edge, notes } => {
                    state.claim(Player::Maker, &[edge]).map_err(|source| {
                        EngineError::IllegalStrategyMove {
                            player: Player::Maker,
                            index,
                            edges: vec![edge],
                            source,
                        }
                    })?;
                    transcript.push(MoveRecord::new(index, Player::Maker, vec![edge], notes));
                    if let Some(cert) = maker.certificate(&state) {
                        if !verify_certificate(&state, goal, &cert) {
                            return Err(EngineError::InvalidCertificate {
                                goal,
                                maker_moves: state.maker_moves(),
                            });
                        }
                        certificate = Some(cert);
                        break Outcome::MakerWin;
                    }
                    if state.maker_moves() >= cap {
                        break Outcome::CapReached;
                    }
                }
            },
        }
    };
    Ok(GameResult {
        outcome,
        maker_moves_used: state.maker_moves(),
        certificate,
        transcript,
        stats: maker.stats(),
        final_state: state,
    })
}

/// Checks that `cert` is a subset of Maker's edges forming the goal
/// structure on all `n` vertices.
pub fn verify_certificate(state: &GameState, goal: GoalKind, cert: &[Edge]) -> bool {
    let n = state.n();
    if cert.iter().any(|&e| e.v as usize >= n || !state.is_maker(e)) {
        return false;
    }
    let mut sorted = cert.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cert.len() {
        return false;
    }
    let g = Graph::from_edges(n, sorted.iter().copied());
    match goal {
        GoalKind::PerfectMatching => {
            n % 2 == 0 && cert.len() == n / 2 && (0..n).all(|v| g.degree(v) == 1)
        }
        GoalKind::HamiltonCycle => {
            n >= 3 && cert.len() == n && (0..n).all(|v| g.degree(v) == 2) && g.is_connected()
        }
        GoalKind::Connectivity => cert.len() == n - 1 && g.is_connected() && g.is_acyclic(),
        GoalKind::MinDegree(c) => g.min_degree() >= c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(u: usize, v: usize) -> Edge {
        Edge::new(u, v)
    }

    fn board_with_maker(n: usize, edges: &[Edge]) -> GameState {
        let mut s = GameState::new(n, 1).unwrap();
        for &x in edges {
            s.force_claim(Player::Maker, &[x]).unwrap();
        }
        s
    }

    #[test]
    fn certificates() {
        let s = board_with_maker(4, &[e(0, 1), e(2, 3), e(1, 2), e(0, 3)]);
        assert!(verify_certificate(&s, GoalKind::PerfectMatching, &[e(0, 1), e(2, 3)]));
        assert!(verify_certificate(
            &s,
            GoalKind::HamiltonCycle,
            &[e(0, 1), e(1, 2), e(2, 3), e(3, 0)]
        ));
        assert!(!verify_certificate(&s, GoalKind::PerfectMatching, &[e(0, 1), e(1, 2)]));
        assert!(verify_certificate(&s, GoalKind::Connectivity, &[e(0, 1), e(1, 2), e(2, 3)]));
        assert!(!verify_certificate(&s, GoalKind::Connectivity, &[e(0, 1), e(1, 2), e(0, 2)]));
        // Not Maker's edge.
        assert!(!verify_certificate(&s, GoalKind::PerfectMatching, &[e(0, 2), e(1, 3)]));
    }

    #[test]
    fn goal_codes_round_trip() {
        for g in [
            GoalKind::PerfectMatching,
            GoalKind::HamiltonCycle,
            GoalKind::Connectivity,
            GoalKind::MinDegree(12),
        ] {
            assert_eq!(g.to_string().parse::<GoalKind>().unwrap(), g);
        }
    }
}
