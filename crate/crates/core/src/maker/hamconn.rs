//! Building a Hamilton-connected graph on a small vertex set `T`: the
//! danger strategy inside `T` (against bias `2b`, as Maker only plays there
//! every other move) up to a minimum degree, then further danger moves
//! until a Hamilton path is exhibited for every pair of vertices.

use serde::{Deserialize, Serialize};

use crate::board::{Edge, GameState};
use crate::degree_game::{danger_step, Domain, Partner};
use crate::engine::{Forfeit, MakerAction, MakerStrategy, Notes};
use crate::graph::Graph;
use crate::oracle;

/// Largest expander order the bitmask search supports.
pub const MAX_ORDER: usize = 64;
/// Below this order an inconclusive search falls back to the subset DP.
pub const DP_FALLBACK_ORDER: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HamconnConfig {
    pub min_degree: usize,
    /// Move budget per expander; `None` means `⌈t ln² t⌉`.
    pub budget: Option<usize>,
    /// Search nodes per vertex pair before a pair counts as unresolved.
    pub search_nodes: usize,
    pub seed: u64,
}

impl Default for HamconnConfig {
    fn default() -> Self {
        HamconnConfig { min_degree: 12, budget: None, search_nodes: 20_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    Found(Vec<usize>),
    Absent,
    Unknown,
}

/// Depth-first search for a Hamilton path from `p` to `q` (`n <= 64`),
/// fewest-onward-neighbours first, pruning states where some unvisited
/// vertex other than `q` has fewer than two usable neighbours.
pub fn search_hamilton_path(graph: &Graph, p: usize, q: usize, max_nodes: usize) -> Search {
    let n = graph.n();
    assert!(n <= MAX_ORDER);
    if p == q {
        return if n == 1 { Search::Found(vec![p]) } else { Search::Absent };
    }
    let rows: Vec<u64> = (0..n).map(|v| graph.row_mask(v)).collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut path = vec![p];
    let mut nodes = 0usize;
    match dfs(&rows, q, 1 << p, full, &mut path, &mut nodes, max_nodes) {
        Some(true) => Search::Found(path),
        Some(false) => Search::Absent,
        None => Search::Unknown,
    }
}

fn dfs(rows: &[u64], q: usize, visited: u64, full: u64, path: &mut Vec<usize>, nodes: &mut usize, max: usize) -> Option<bool> {
    let cur = *path.last().expect("nonempty");
    if visited == full {
        return Some(cur == q);
    }
    *nodes += 1;
    if *nodes > max {
        return None;
    }
    let remaining = full & !visited;
    let usable = remaining | 1 << cur;
    let mut bits = remaining;
    while bits != 0 {
        let w = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let need = if w == q { 1 } else { 2 };
        if (rows[w] & usable).count_ones() < need {
            return Some(false);
        }
    }
    let mut cand = rows[cur] & remaining;
    if remaining != 1 << q {
        cand &= !(1 << q);
    }
    let mut order: Vec<(u32, usize)> = Vec::with_capacity(cand.count_ones() as usize);
    while cand != 0 {
        let w = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        order.push(((rows[w] & remaining).count_ones(), w));
    }
    order.sort_unstable();
    let mut unknown = false;
    for (_, w) in order {
        path.push(w);
        match dfs(rows, q, visited | 1 << w, full, path, nodes, max) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => unknown = true,
        }
        path.pop();
        if unknown {
            return None;
        }
    }
    Some(false)
}

/// Hamilton path from `p` to `q`: the search, then the subset DP when the
/// search is inconclusive on a small graph.
pub fn hamilton_path_between(graph: &Graph, p: usize, q: usize, max_nodes: usize) -> Search {
    match search_hamilton_path(graph, p, q, max_nodes) {
        Search::Unknown if graph.n() <= DP_FALLBACK_ORDER => match oracle::hamilton_path(graph, p, q) {
            Some(path) => Search::Found(path),
            None => Search::Absent,
        },
        other => other,
    }
}

/// Every pair has an exhibited Hamilton path. Unresolved pairs count as
/// failures, so `true` is always backed by explicit paths.
pub fn certify_hamilton_connected(graph: &Graph, max_nodes: usize) -> bool {
    let n = graph.n();
    if n <= 2 {
        return n < 2 || graph.has_edge(0, 1);
    }
    if n >= 4 && graph.min_degree() < 3 {
        return false;
    }
    (0..n).all(|p| (p + 1..n).all(|q| matches!(hamilton_path_between(graph, p, q, max_nodes), Search::Found(_))))
}

pub fn default_budget(t: usize) -> usize {
    let l = (t as f64).ln();
    (t as f64 * l * l).ceil() as usize
}

/// Maker's graph induced on `vertices` (vertex `i` is `vertices[i]`).
pub fn maker_subgraph(state: &GameState, vertices: &[usize]) -> Graph {
    let mut pos = vec![usize::MAX; state.n()];
    for (i, &v) in vertices.iter().enumerate() {
        pos[v] = i;
    }
    let mut g = Graph::new(vertices.len());
    for (i, &v) in vertices.iter().enumerate() {
        for &u in state.maker_neighbors(v) {
            let j = pos[u as usize];
            if j != usize::MAX && i < j {
                g.add_edge(i, j);
            }
        }
    }
    g
}

#[derive(Clone, Debug)]
pub struct ExpanderBuilder {
    domain: Domain,
    min_degree: usize,
    bias: usize,
    budget: usize,
    search_nodes: usize,
    moves: usize,
    partner: Partner,
    complete: bool,
}

impl ExpanderBuilder {
    /// `bias` is the bias the game inside `vertices` is played against.
    pub fn new(n: usize, vertices: &[usize], bias: usize, cfg: &HamconnConfig) -> Self {
        assert!(vertices.len() <= MAX_ORDER, "expander order above {MAX_ORDER}");
        let t = vertices.len();
        ExpanderBuilder {
            domain: Domain::new(n, vertices),
            min_degree: cfg.min_degree.min(t.saturating_sub(1)),
            bias,
            budget: cfg.budget.unwrap_or_else(|| default_budget(t)),
            search_nodes: cfg.search_nodes,
            moves: 0,
            partner: Partner::random(cfg.seed ^ vertices.first().copied().unwrap_or(0) as u64),
            complete: false,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        self.domain.vertices()
    }

    pub fn moves(&self) -> usize {
        self.moves
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    fn min_degree_reached(&self, state: &GameState) -> bool {
        self.domain.vertices().iter().all(|&v| self.domain.deg_m(state, v) >= self.min_degree)
    }

    /// Re-checks completion; `true` once Maker's graph on the set is
    /// Hamilton-connected.
    pub fn check(&mut self, state: &GameState) -> bool {
        if !self.complete && self.min_degree_reached(state) {
            self.complete = certify_hamilton_connected(&maker_subgraph(state, self.domain.vertices()), self.search_nodes);
        }
        self.complete
    }

    /// The next edge inside the set, or `None` when complete.
    pub fn next_edge(&mut self, state: &GameState) -> Result<Option<Edge>, Forfeit> {
        if self.check(state) {
            return Ok(None);
        }
        if self.moves >= self.budget {
            return Err(Forfeit::new(1, format!("expander budget of {} moves exhausted", self.budget)));
        }
        let c = if self.min_degree_reached(state) { self.domain.len() - 1 } else { self.min_degree };
        let (_, e, _) = danger_step(state, &self.domain, c, self.bias, &mut self.partner)
            .map_err(|e| Forfeit::new(1, format!("expander: {e}")))?;
        self.moves += 1;
        Ok(Some(e))
    }

    /// Hamilton path between `p` and `q` in Maker's graph on the set.
    pub fn hamilton_path(&self, state: &GameState, p: usize, q: usize) -> Option<Vec<usize>> {
        let vs = self.domain.vertices();
        let (i, j) = (vs.iter().position(|&v| v == p)?, vs.iter().position(|&v| v == q)?);
        match hamilton_path_between(&maker_subgraph(state, vs), i, j, self.search_nodes) {
            Search::Found(path) => Some(path.into_iter().map(|k| vs[k]).collect()),
            _ => None,
        }
    }
}

/// The builder as a stand-alone strategy on a board whose vertex set is `T`.
pub struct HamconnMaker {
    cfg: HamconnConfig,
    builder: Option<ExpanderBuilder>,
}

impl HamconnMaker {
    pub fn new(cfg: HamconnConfig) -> Self {
        HamconnMaker { cfg, builder: None }
    }
}

impl MakerStrategy for HamconnMaker {
    fn name(&self) -> String {
        "hamconn".into()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        let b = self.builder.get_or_insert_with(|| {
            let all: Vec<usize> = (0..state.n()).collect();
            ExpanderBuilder::new(state.n(), &all, state.bias(), &self.cfg)
        });
        match b.next_edge(state) {
            Ok(Some(edge)) => MakerAction::claim(edge),
            Ok(None) => MakerAction::Forfeit(Forfeit::new(1, "already Hamilton-connected")),
            Err(f) => MakerAction::Forfeit(f),
        }
    }

    fn certificate(&self, state: &GameState) -> Option<Vec<Edge>> {
        let b = self.builder.as_ref()?;
        let mut probe = b.clone();
        if !probe.check(state) {
            return None;
        }
        let path = probe.hamilton_path(state, 0, state.n() - 1)?;
        Some(path.windows(2).map(|w| Edge::new(w[0], w[1])).collect())
    }

    fn stats(&self) -> Notes {
        let mut out = Notes::new();
        if let Some(b) = &self.builder {
            out.insert("expander_moves".into(), b.moves() as f64);
        }
        out
    }
}
