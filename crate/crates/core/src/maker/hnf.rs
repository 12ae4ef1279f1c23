//! Hamilton cycle on `K_U \ H` in three stages: a minimum-degree expander
//! via the danger strategy with random partners, merging components, then
//! boosters until Hamiltonian.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::board::{Edge, GameState};
use crate::degree_game::{danger_step, DegreeError, Domain, Partner};
use crate::engine::{Forfeit, MakerAction, MakerStrategy, Notes};
use crate::graph::Graph;
use crate::maker::posa::{self, BoosterError};
use crate::maker::MakerError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HnfConfig {
    /// Target minimum degree of stage 1.
    pub min_degree: usize,
    /// Maker gives up after `cap_factor * |U|` moves.
    pub cap_factor: f64,
    /// Forbidden graph limit `Δ(H) <= delta |U|`.
    pub delta: f64,
    pub check_preconditions: bool,
    pub seed: u64,
}

impl Default for HnfConfig {
    fn default() -> Self {
        HnfConfig {
            min_degree: 12,
            cap_factor: 14.0,
            delta: 0.1,
            check_preconditions: true,
            seed: 0,
        }
    }
}

impl HnfConfig {
    pub fn desk() -> Self {
        HnfConfig {
            min_degree: 6,
            ..HnfConfig::default()
        }
    }
}

/// `Δ(H) <= delta n` and `e(H) <= n^2 / ln n`.
pub fn check_forbidden(n: usize, h: &[Edge], delta: f64) -> Result<(), MakerError> {
    let mut deg = vec![0usize; n];
    for e in h {
        deg[e.u as usize] += 1;
        deg[e.v as usize] += 1;
    }
    let max = deg.iter().copied().max().unwrap_or(0);
    if max as f64 > delta * n as f64 {
        return Err(MakerError::PreconditionViolated(format!(
            "forbidden graph has maximum degree {max} > {delta} * {n}"
        )));
    }
    let limit = (n * n) as f64 / (n as f64).ln();
    if h.len() as f64 > limit {
        return Err(MakerError::PreconditionViolated(format!(
            "forbidden graph has {} edges > n^2/ln n = {limit:.1}",
            h.len()
        )));
    }
    Ok(())
}

/// Stage-1 target: `min(k, max(2, (|U|-1) / (2(b+1))))`. Small vertex sets
/// cannot host degree `k` once Breaker's share of `K_U` is accounted for.
pub fn effective_min_degree(k: usize, len: usize, b: usize) -> usize {
    k.min(((len.saturating_sub(1)) / (2 * (b + 1))).max(2))
}

/// The three-stage builder on a vertex set `U` of the board. Maker only
/// claims edges inside `U`; Breaker's edges inside `U` play the role of
/// the forbidden graph.
#[derive(Clone, Debug)]
pub struct HnfCore {
    min_degree: usize,
    domain: Domain,
    local: Vec<usize>,
    graph: Graph,
    seen: Vec<usize>,
    stage: u32,
    moves: usize,
    cap: usize,
    partner: Partner,
    rng: ChaCha8Rng,
    path: Vec<usize>,
    cycle: Option<Vec<usize>>,
    stage_moves: [usize; 3],
}

impl HnfCore {
    pub fn new(state: &GameState, vertices: &[usize], cfg: HnfConfig) -> Result<Self, MakerError> {
        let domain = Domain::new(state.n(), vertices);
        if domain.len() < 3 {
            return Err(MakerError::PreconditionViolated(format!(
                "vertex set of size {} is too small",
                domain.len()
            )));
        }
        let mut local = vec![usize::MAX; state.n()];
        for (i, &v) in domain.vertices().iter().enumerate() {
            local[v] = i;
        }
        if cfg.check_preconditions {
            let h: Vec<Edge> = state
                .breaker_edges()
                .into_iter()
                .filter(|e| domain.contains(e.u as usize) && domain.contains(e.v as usize))
                .map(|e| Edge::new(local[e.u as usize], local[e.v as usize]))
                .collect();
            check_forbidden(domain.len(), &h, cfg.delta)?;
        }
        let cap = (cfg.cap_factor * domain.len() as f64).ceil() as usize;
        let graph = Graph::new(domain.len());
        let min_degree = effective_min_degree(cfg.min_degree, domain.len(), state.bias());
        Ok(HnfCore {
            min_degree,
            partner: Partner::random(cfg.seed),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15),
            seen: vec![0; state.n()],
            domain,
            local,
            graph,
            stage: 1,
            moves: 0,
            cap,
            path: Vec::new(),
            cycle: None,
            stage_moves: [0; 3],
        })
    }

    pub fn vertices(&self) -> &[usize] {
        self.domain.vertices()
    }

    /// Stage-1 target degree after clamping to the size of `U`.
    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn moves(&self) -> usize {
        self.moves
    }

    pub fn stage_moves(&self) -> [usize; 3] {
        self.stage_moves
    }

    /// The Hamilton cycle on `U` (global vertex order), once built.
    pub fn cycle(&self) -> Option<&[usize]> {
        self.cycle.as_deref()
    }

    fn sync(&mut self, state: &GameState) {
        for &v in self.domain.vertices() {
            let nb = state.maker_neighbors(v);
            for &u in &nb[self.seen[v]..] {
                let u = u as usize;
                if self.domain.contains(u) {
                    self.graph.add_edge(self.local[v], self.local[u]);
                }
            }
            self.seen[v] = nb.len();
        }
    }

    fn global(&self, i: usize) -> usize {
        self.domain.vertices()[i]
    }

    fn refresh_cycle(&mut self) {
        if !self.graph.is_connected() {
            return;
        }
        let seed = (!self.path.is_empty()).then_some(self.path.as_slice());
        if let Some(order) = posa::find_hamilton_cycle(&self.graph, seed) {
            self.cycle = Some(order.iter().map(|&i| self.global(i)).collect());
        } else {
            self.path = posa::long_path(&self.graph, seed);
        }
    }

    /// Maker's next edge inside `U`. The edge is recorded as claimed.
    pub fn next_edge(&mut self, state: &GameState) -> Result<(Edge, Notes), Forfeit> {
        self.sync(state);
        if self.moves >= self.cap {
            return Err(Forfeit::new(self.stage, format!("move cap {} reached", self.cap)));
        }
        let mut notes = Notes::new();
        if self.stage == 1 {
            match danger_step(state, &self.domain, self.min_degree, state.bias(), &mut self.partner) {
                Ok((v, e, d)) => {
                    notes.insert("v".into(), v as f64);
                    notes.insert("dang".into(), d as f64);
                    return Ok(self.commit(e, notes));
                }
                Err(DegreeError::NoDangerousVertex) => self.stage = 2,
                Err(DegreeError::NoFreeEdge(v)) => {
                    return Err(Forfeit::new(1, format!("vertex {v} has no free edge inside the set")));
                }
            }
        }
        if self.stage == 2 {
            if self.graph.is_connected() {
                self.stage = 3;
                self.refresh_cycle();
            } else {
                let e = self.merge_edge(state)?;
                return Ok(self.commit(e, notes));
            }
        }
        if self.cycle.is_some() {
            // Already won on U; spend the move on any free pair inside U.
            let vs = self.domain.vertices();
            let spare = vs.iter().find_map(|&a| {
                vs.iter().find(|&&b| a < b && state.pair_free(a, b)).map(|&b| Edge::new(a, b))
            });
            return match spare {
                Some(e) => Ok(self.commit(e, notes)),
                None => Err(Forfeit::new(3, "no free pair left inside the set")),
            };
        }
        let free = |a: usize, b: usize| state.pair_free(self.global(a), self.global(b));
        let seed = (!self.path.is_empty()).then_some(self.path.as_slice());
        match posa::find_booster(&self.graph, free, seed) {
            Ok(e) => {
                let (a, b) = e.endpoints();
                let e = Edge::new(self.global(a), self.global(b));
                Ok(self.commit(e, notes))
            }
            Err(BoosterError::AlreadyHamiltonian) => {
                // Only reachable if the cycle search missed it.
                Err(Forfeit::new(3, "graph is Hamiltonian but no cycle was extracted"))
            }
            Err(BoosterError::Disconnected) => Err(Forfeit::new(3, "graph became disconnected")),
            Err(BoosterError::NoBooster) => Err(Forfeit::new(3, "no free booster")),
        }
    }

    /// A free edge from the smallest component to the rest of `U`.
    fn merge_edge(&mut self, state: &GameState) -> Result<Edge, Forfeit> {
        let comps = self.graph.components();
        let mut size = vec![0usize; comps.len()];
        for &c in &comps {
            size[c] += 1;
        }
        let mut labels: Vec<usize> = (0..comps.len()).filter(|&c| size[c] > 0).collect();
        labels.sort_by_key(|&c| (size[c], c));
        for &c in &labels {
            let mut options = Vec::new();
            for a in (0..comps.len()).filter(|&a| comps[a] == c) {
                for b in (0..comps.len()).filter(|&b| comps[b] != c) {
                    if state.pair_free(self.global(a), self.global(b)) {
                        options.push(Edge::new(self.global(a), self.global(b)));
                    }
                }
            }
            if let Some(&e) = options.choose(&mut self.rng) {
                return Ok(e);
            }
        }
        Err(Forfeit::new(2, "no free edge between components"))
    }

    fn commit(&mut self, e: Edge, mut notes: Notes) -> (Edge, Notes) {
        let (a, b) = e.endpoints();
        self.graph.add_edge(self.local[a], self.local[b]);
        self.moves += 1;
        self.stage_moves[self.stage as usize - 1] += 1;
        notes.insert("hnf_stage".into(), self.stage as f64);
        if self.stage == 1 && self.graph.min_degree() >= self.min_degree {
            self.stage = 2;
        }
        if self.stage == 2 && self.graph.is_connected() {
            self.stage = 3;
        }
        if self.stage == 3 {
            self.refresh_cycle();
        }
        (e, notes)
    }

    /// Maker's graph on `U`, relabelled `0..|U|`.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

/// Stand-alone Hamilton cycle Maker on the whole board.
pub struct HnfMaker {
    cfg: HnfConfig,
    core: Option<HnfCore>,
}

impl HnfMaker {
    pub fn new(cfg: HnfConfig) -> Self {
        HnfMaker { cfg, core: None }
    }
}

impl MakerStrategy for HnfMaker {
    fn name(&self) -> String {
        "hnf".into()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        if self.core.is_none() {
            let all: Vec<usize> = (0..state.n()).collect();
            // H is what Breaker held before the game, not its first turn.
            if self.cfg.check_preconditions {
                if let Err(e) = check_forbidden(state.n(), state.preclaimed_edges(), self.cfg.delta) {
                    return MakerAction::Forfeit(Forfeit::new(0, e.to_string()));
                }
            }
            let cfg = HnfConfig { check_preconditions: false, ..self.cfg.clone() };
            match HnfCore::new(state, &all, cfg) {
                Ok(c) => self.core = Some(c),
                Err(e) => return MakerAction::Forfeit(Forfeit::new(0, e.to_string())),
            }
        }
        let core = self.core.as_mut().expect("initialised");
        match core.next_edge(state) {
            Ok((edge, mut notes)) => {
                notes.insert("stage".into(), notes["hnf_stage"]);
                MakerAction::Claim { edge, notes }
            }
            Err(f) => MakerAction::Forfeit(f),
        }
    }

    fn certificate(&self, _state: &GameState) -> Option<Vec<Edge>> {
        self.core.as_ref()?.cycle().map(posa::cycle_edges)
    }

    fn stats(&self) -> Notes {
        let mut out = Notes::new();
        if let Some(c) = &self.core {
            for (i, m) in c.stage_moves().iter().enumerate() {
                out.insert(format!("stage{}_moves", i + 1), *m as f64);
            }
        }
        out
    }
}
