//! Board state for a (1:b) Maker-Breaker game on the edges of `K_n`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unordered vertex pair, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct Edge {
    pub u: u32,
    pub v: u32,
}

impl Edge {
    /// Normalizes the pair. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop {a}");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { u: u as u32, v: v as u32 }
    }

    pub fn try_new(a: usize, b: usize) -> Option<Self> {
        (a != b).then(|| Edge::new(a, b))
    }

    #[inline]
    pub fn endpoints(self) -> (usize, usize) {
        (self.u as usize, self.v as usize)
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        self.u as usize == x || self.v as usize == x
    }

    /// The endpoint that is not `x`.
    #[inline]
    pub fn other(self, x: usize) -> usize {
        if self.u as usize == x {
            self.v as usize
        } else {
            debug_assert_eq!(self.v as usize, x);
            self.u as usize
        }
    }
}

impl From<[u32; 2]> for Edge {
    fn from(p: [u32; 2]) -> Self {
        Edge::new(p[0] as usize, p[1] as usize)
    }
}

impl From<Edge> for [u32; 2] {
    fn from(e: Edge) -> Self {
        [e.u, e.v]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "M")]
    Maker,
    #[serde(rename = "B")]
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Maker => "Maker",
            Player::Breaker => "Breaker",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("invalid board parameters: {0}")]
    InvalidParameters(String),
    #[error("edge {0} is not free")]
    EdgeNotFree(Edge),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("it is {expected}'s turn, not {got}'s")]
    WrongTurn { expected: Player, got: Player },
    #[error("{player} must claim {expected} edge(s) this turn, got {got}")]
    WrongArity {
        player: Player,
        expected: usize,
        got: usize,
    },
    #[error("edge {0} listed twice in one move")]
    DuplicateEdge(Edge),
    #[error("edges can only be pre-claimed before the first move")]
    GameInProgress,
}

/// Triangular bitmask over the pairs `{u,v}`, `u < v < n`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PairBits {
    words: Vec<u64>,
}

impl PairBits {
    fn new(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        PairBits {
            words: vec![0; pairs.div_ceil(64)],
        }
    }

    #[inline]
    fn index(e: Edge) -> usize {
        let v = e.v as usize;
        v * (v - 1) / 2 + e.u as usize
    }

    #[inline]
    fn get(&self, e: Edge) -> bool {
        let i = Self::index(e);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, e: Edge) {
        let i = Self::index(e);
        self.words[i >> 6] |= 1 << (i & 63);
    }
}

/// Complete game state: ownership of every edge of `K_n`, per-vertex
/// adjacency for both players, move counters and whose turn it is.
///
/// Breaker moves first. Breaker's final turn may claim fewer than `b` edges
/// when fewer remain free.
#[derive(Clone, Debug)]
pub struct GameState {
    n: usize,
    b: usize,
    maker: PairBits,
    breaker: PairBits,
    maker_adj: Vec<Vec<u32>>,
    breaker_adj: Vec<Vec<u32>>,
    maker_edge_count: usize,
    breaker_edge_count: usize,
    maker_moves: usize,
    breaker_moves: usize,
    preclaimed: Vec<Edge>,
    turn: Player,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.b == other.b
            && self.maker == other.maker
            && self.breaker == other.breaker
            && self.maker_moves == other.maker_moves
            && self.breaker_moves == other.breaker_moves
            && self.preclaimed == other.preclaimed
            && self.turn == other.turn
    }
}

impl Eq for GameState {}

pub const MIN_VERTICES: usize = 4;

impl GameState {
    pub fn new(n: usize, b: usize) -> Result<Self, BoardError> {
        if n < MIN_VERTICES {
            return Err(BoardError::InvalidParameters(format!(
                "n = {n} is below the minimum of {MIN_VERTICES}"
            )));
        }
        if b == 0 {
            return Err(BoardError::InvalidParameters("bias must be at least 1".into()));
        }
        if n > u32::MAX as usize / 2 {
            return Err(BoardError::InvalidParameters(format!("n = {n} is too large")));
        }
        Ok(GameState {
            n,
            b,
            maker: PairBits::new(n),
            breaker: PairBits::new(n),
            maker_adj: vec![Vec::new(); n],
            breaker_adj: vec![Vec::new(); n],
            maker_edge_count: 0,
            breaker_edge_count: 0,
            maker_moves: 0,
            breaker_moves: 0,
            preclaimed: Vec::new(),
            turn: Player::Breaker,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn bias(&self) -> usize {
        self.b
    }

    #[inline]
    pub fn turn(&self) -> Player {
        self.turn
    }

    pub fn maker_moves(&self) -> usize {
        self.maker_moves
    }

    pub fn breaker_moves(&self) -> usize {
        self.breaker_moves
    }

    /// Number of Breaker edges that were placed before the game started
    /// (a forbidden graph `H`).
    pub fn preclaimed(&self) -> usize {
        self.preclaimed.len()
    }

    /// The edges given to Breaker before the game started.
    pub fn preclaimed_edges(&self) -> &[Edge] {
        &self.preclaimed
    }

    pub fn total_pairs(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn maker_edge_count(&self) -> usize {
        self.maker_edge_count
    }

    pub fn breaker_edge_count(&self) -> usize {
        self.breaker_edge_count
    }

    pub fn free_count(&self) -> usize {
        self.total_pairs() - self.maker_edge_count - self.breaker_edge_count
    }

    /// Number of edges the player to move must claim: exactly one for Maker,
    /// `min(b, free)` for Breaker.
    pub fn required_arity(&self, player: Player) -> usize {
        match player {
            Player::Maker => 1.min(self.free_count()),
            Player::Breaker => self.b.min(self.free_count()),
        }
    }

    fn check_edge(&self, e: Edge) -> Result<(), BoardError> {
        if e.v as usize >= self.n {
            return Err(BoardError::VertexOutOfRange {
                vertex: e.v as usize,
                n: self.n,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn is_maker(&self, e: Edge) -> bool {
        self.maker.get(e)
    }

    #[inline]
    pub fn is_breaker(&self, e: Edge) -> bool {
        self.breaker.get(e)
    }

    #[inline]
    pub fn is_free(&self, e: Edge) -> bool {
        !self.maker.get(e) && !self.breaker.get(e)
    }

    /// `is_free` on a raw pair; false for `u == v`.
    #[inline]
    pub fn pair_free(&self, u: usize, v: usize) -> bool {
        u != v && self.is_free(Edge::new(u, v))
    }

    pub fn owner(&self, e: Edge) -> Option<Player> {
        if self.maker.get(e) {
            Some(Player::Maker)
        } else if self.breaker.get(e) {
            Some(Player::Breaker)
        } else {
            None
        }
    }

    fn validate_edges(&self, edges: &[Edge]) -> Result<(), BoardError> {
        for (i, &e) in edges.iter().enumerate() {
            self.check_edge(e)?;
            if !self.is_free(e) {
                return Err(BoardError::EdgeNotFree(e));
            }
            if edges[..i].contains(&e) {
                return Err(BoardError::DuplicateEdge(e));
            }
        }
        Ok(())
    }

    fn put(&mut self, player: Player, e: Edge) {
        let (u, v) = e.endpoints();
        match player {
            Player::Maker => {
                self.maker.set(e);
                self.maker_adj[u].push(v as u32);
                self.maker_adj[v].push(u as u32);
                self.maker_edge_count += 1;
            }
            Player::Breaker => {
                self.breaker.set(e);
                self.breaker_adj[u].push(v as u32);
                self.breaker_adj[v].push(u as u32);
                self.breaker_edge_count += 1;
            }
        }
    }

    fn advance(&mut self, player: Player) {
        match player {
            Player::Maker => self.maker_moves += 1,
            Player::Breaker => self.breaker_moves += 1,
        }
        self.turn = player.opponent();
    }

    /// Plays one turn for `player`. Maker passes exactly one edge, Breaker
    /// exactly `min(b, free)` edges.
    pub fn claim(&mut self, player: Player, edges: &[Edge]) -> Result<(), BoardError> {
        if player != self.turn {
            return Err(BoardError::WrongTurn {
                expected: self.turn,
                got: player,
            });
        }
        let expected = self.required_arity(player);
        if edges.len() != expected {
            return Err(BoardError::WrongArity {
                player,
                expected,
                got: edges.len(),
            });
        }
        self.validate_edges(edges)?;
        for &e in edges {
            self.put(player, e);
        }
        self.advance(player);
        Ok(())
    }

    /// Applies a move ignoring turn order and arity. Used to replay
    /// hand-built transcripts (e.g. with injected extra Breaker turns).
    pub fn force_claim(&mut self, player: Player, edges: &[Edge]) -> Result<(), BoardError> {
        self.validate_edges(edges)?;
        for &e in edges {
            self.put(player, e);
        }
        self.advance(player);
        Ok(())
    }

    /// Breaker gives up the turn without claiming anything.
    pub fn pass(&mut self, player: Player) -> Result<(), BoardError> {
        if player != self.turn {
            return Err(BoardError::WrongTurn {
                expected: self.turn,
                got: player,
            });
        }
        self.advance(player);
        Ok(())
    }

    /// Hands a forbidden edge set to Breaker before the game starts.
    pub fn preclaim_breaker(&mut self, edges: &[Edge]) -> Result<(), BoardError> {
        if self.maker_moves + self.breaker_moves > 0 {
            return Err(BoardError::GameInProgress);
        }
        self.validate_edges(edges)?;
        for &e in edges {
            self.put(Player::Breaker, e);
        }
        self.preclaimed.extend_from_slice(edges);
        Ok(())
    }

    #[inline]
    pub fn deg_m(&self, v: usize) -> usize {
        self.maker_adj[v].len()
    }

    #[inline]
    pub fn deg_b(&self, v: usize) -> usize {
        self.breaker_adj[v].len()
    }

    /// Breaker degree of `v` into the vertices accepted by `in_set`.
    pub fn deg_b_in(&self, v: usize, in_set: impl Fn(usize) -> bool) -> usize {
        self.breaker_adj[v]
            .iter()
            .filter(|&&u| in_set(u as usize))
            .count()
    }

    pub fn deg_m_in(&self, v: usize, in_set: impl Fn(usize) -> bool) -> usize {
        self.maker_adj[v]
            .iter()
            .filter(|&&u| in_set(u as usize))
            .count()
    }

    pub fn maker_neighbors(&self, v: usize) -> &[u32] {
        &self.maker_adj[v]
    }

    pub fn breaker_neighbors(&self, v: usize) -> &[u32] {
        &self.breaker_adj[v]
    }

    /// Number of free edges at `v`.
    pub fn free_degree(&self, v: usize) -> usize {
        self.n - 1 - self.deg_m(v) - self.deg_b(v)
    }

    /// All `u` in `set`, `u != v`, with `{u,v}` free, in ascending order.
    pub fn free_neighbors(&self, v: usize, set: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut out: Vec<usize> = set
            .into_iter()
            .filter(|&u| u != v && self.is_free(Edge::new(u, v)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn maker_edges(&self) -> Vec<Edge> {
        collect_edges(&self.maker_adj)
    }

    pub fn breaker_edges(&self) -> Vec<Edge> {
        collect_edges(&self.breaker_adj)
    }

    /// Free edges in lexicographic order.
    pub fn free_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n)
                .map(move |v| Edge::new(u, v))
                .filter(move |&e| self.is_free(e))
        })
    }
}

fn collect_edges(adj: &[Vec<u32>]) -> Vec<Edge> {
    let mut out: Vec<Edge> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nb)| {
            nb.iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| Edge::new(u, v as usize))
        })
        .collect();
    out.sort_unstable();
    out
}
