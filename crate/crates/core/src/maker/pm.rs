//! Perfect matching Maker. Stage 1 matches the vertex of largest Breaker
//! degree inside the unmatched set `U`; stage 2 runs the Hamilton cycle
//! builder on the residual `U` and stops as soon as Maker's graph on `U`
//! has a perfect matching.

use std::collections::HashMap;

use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::board::{Edge, GameState};
use crate::engine::{Forfeit, MakerAction, MakerStrategy, Notes};
use crate::maker::hnf::{HnfConfig, HnfCore};
use crate::maker::MakerError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PmConfig {
    pub delta: f64,
    /// Size `m` of the residual set handed to stage 2; `None` uses
    /// `max(20, 4b⌈ln(b+1)⌉)`.
    pub residual: Option<usize>,
    /// Refuse biases above `max(1, ⌊δn/(100 ln n)⌋)`.
    pub enforce_bias_limit: bool,
    /// Boards with at most this many vertices are solved exactly.
    pub exact_below: usize,
    pub hnf: HnfConfig,
}

impl Default for PmConfig {
    fn default() -> Self {
        PmConfig {
            delta: 0.1,
            residual: None,
            enforce_bias_limit: true,
            exact_below: 6,
            hnf: HnfConfig::default(),
        }
    }
}

impl PmConfig {
    pub fn desk() -> Self {
        PmConfig {
            hnf: HnfConfig::desk(),
            ..PmConfig::default()
        }
    }

    pub fn residual_for(&self, b: usize) -> usize {
        self.residual
            .unwrap_or_else(|| 20usize.max(4 * b * ((b as f64 + 1.0).ln().ceil() as usize)))
    }
}

/// `max(1, ⌊δn / (100 ln n)⌋)`.
pub fn bias_limit(n: usize, delta: f64) -> usize {
    ((delta * n as f64 / (100.0 * (n as f64).ln())).floor() as usize).max(1)
}

/// The stage-1 pick: `v` maximises `d_B(·,U)` over `U`, `w` maximises it
/// over the free partners of `v` in `U`. Ties go to the lower index.
pub fn pm_stage1_move(state: &GameState, u_set: &[usize]) -> Result<Edge, Forfeit> {
    let mut member = vec![false; state.n()];
    for &v in u_set {
        member[v] = true;
    }
    let deg: Vec<usize> = (0..state.n())
        .map(|v| if member[v] { state.deg_b_in(v, |x| member[x]) } else { 0 })
        .collect();
    pick(state, u_set, &deg)
}

fn pick(state: &GameState, u_set: &[usize], deg: &[usize]) -> Result<Edge, Forfeit> {
    let v = *u_set
        .iter()
        .max_by_key(|&&v| (deg[v], std::cmp::Reverse(v)))
        .ok_or_else(|| Forfeit::new(1, "unmatched set is empty"))?;
    let w = u_set
        .iter()
        .copied()
        .filter(|&w| w != v && state.pair_free(v, w))
        .max_by_key(|&w| (deg[w], std::cmp::Reverse(w)))
        .ok_or_else(|| Forfeit::new(1, format!("vertex {v} has no free partner in U")))?;
    Ok(Edge::new(v, w))
}

/// A perfect matching of Maker's graph restricted to `set`, if one exists.
pub fn maker_matching(state: &GameState, set: &[usize]) -> Option<Vec<Edge>> {
    if set.len() % 2 == 1 {
        return None;
    }
    let mut local = vec![usize::MAX; state.n()];
    for (i, &v) in set.iter().enumerate() {
        local[v] = i;
    }
    let mut g: UnGraph<(), ()> = UnGraph::with_capacity(set.len(), 0);
    for _ in set {
        g.add_node(());
    }
    for (i, &v) in set.iter().enumerate() {
        for &u in state.maker_neighbors(v) {
            let j = local[u as usize];
            if j != usize::MAX && i < j {
                g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
            }
        }
    }
    let m = maximum_matching(&g);
    m.is_perfect().then(|| {
        m.edges()
            .map(|(a, b)| Edge::new(set[a.index()], set[b.index()]))
            .collect()
    })
}

/// Exhaustive search for "Maker completes a perfect matching within `k`
/// more moves" on boards with at most 15 pairs.
struct TinySolver {
    n: usize,
    b: usize,
    pairs: Vec<Edge>,
    matchings: Vec<u32>,
    memo: HashMap<(u32, u32, u8), bool>,
}

impl TinySolver {
    fn new(n: usize, b: usize) -> Self {
        let pairs: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| Edge::new(u, v))).collect();
        assert!(pairs.len() <= 32);
        let mut matchings = Vec::new();
        fn rec(rest: Vec<usize>, acc: u32, pairs: &[Edge], out: &mut Vec<u32>) {
            if rest.is_empty() {
                out.push(acc);
                return;
            }
            let a = rest[0];
            for i in 1..rest.len() {
                let idx = pairs.iter().position(|&e| e == Edge::new(a, rest[i])).unwrap();
                let next: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != 0 && j != i).map(|(_, &v)| v).collect();
                rec(next, acc | 1 << idx, pairs, out);
            }
        }
        rec((0..n).collect(), 0, &pairs, &mut matchings);
        TinySolver { n, b, pairs, matchings, memo: HashMap::new() }
    }

    fn masks(&self, state: &GameState) -> (u32, u32) {
        let (mut m, mut b) = (0, 0);
        for (i, &e) in self.pairs.iter().enumerate() {
            if state.is_maker(e) {
                m |= 1 << i;
            } else if state.is_breaker(e) {
                b |= 1 << i;
            }
        }
        (m, b)
    }

    fn has_pm(&self, m: u32) -> bool {
        self.matchings.iter().any(|&p| p & m == p)
    }

    fn free(&self, m: u32, b: u32) -> Vec<usize> {
        (0..self.pairs.len()).filter(|&i| (m | b) >> i & 1 == 0).collect()
    }

    /// Maker to move with `k` moves left.
    fn maker_wins(&mut self, m: u32, b: u32, k: u8) -> bool {
        if k == 0 {
            return false;
        }
        if let Some(&r) = self.memo.get(&(m, b, k)) {
            return r;
        }
        let r = self.free(m, b).into_iter().any(|i| {
            let m2 = m | 1 << i;
            self.has_pm(m2) || self.breaker_loses(m2, b, k - 1)
        });
        self.memo.insert((m, b, k), r);
        r
    }

    fn breaker_loses(&mut self, m: u32, b: u32, k: u8) -> bool {
        if k == 0 {
            return false;
        }
        let free = self.free(m, b);
        if free.is_empty() {
            return false;
        }
        let take = self.b.min(free.len());
        let mut idx: Vec<usize> = (0..take).collect();
        loop {
            let s: u32 = idx.iter().map(|&j| 1u32 << free[j]).sum();
            if !self.maker_wins(m, b | s, k) {
                return false;
            }
            // Next `take`-subset in lexicographic order.
            let mut i = take;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                if idx[i] < free.len() - take + i {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..take {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// The first edge of a fastest forced win, if Maker has one within
    /// `limit` moves.
    fn best_move(&mut self, state: &GameState, limit: usize) -> Option<(Edge, usize)> {
        let (m, b) = self.masks(state);
        for k in 1..=limit.min(self.n * self.n) as u8 {
            for i in self.free(m, b) {
                let m2 = m | 1 << i;
                if self.has_pm(m2) || self.breaker_loses(m2, b, k - 1) {
                    return Some((self.pairs[i], k as usize));
                }
            }
        }
        None
    }
}

pub struct PmMaker {
    cfg: PmConfig,
    n: usize,
    b: usize,
    residual: usize,
    in_u: Vec<bool>,
    u_len: usize,
    /// `d_B(v, U)` for `v ∈ U`.
    deg_u: Vec<usize>,
    seen: Vec<usize>,
    matching: Vec<Edge>,
    stage: u32,
    core: Option<HnfCore>,
    residual_set: Vec<usize>,
    tiny: Option<TinySolver>,
    stage_moves: [usize; 3],
}

impl PmMaker {
    pub fn new(cfg: PmConfig, n: usize, b: usize) -> Result<Self, MakerError> {
        if n % 2 == 1 || n < 4 {
            return Err(MakerError::PreconditionViolated(format!("n = {n} must be even and at least 4")));
        }
        if cfg.enforce_bias_limit && b > bias_limit(n, cfg.delta) {
            return Err(MakerError::PreconditionViolated(format!(
                "bias {b} exceeds max(1, ⌊δn/(100 ln n)⌋) = {} for δ = {}",
                bias_limit(n, cfg.delta),
                cfg.delta
            )));
        }
        let residual = cfg.residual_for(b);
        let tiny = (n <= cfg.exact_below && n <= 7).then(|| TinySolver::new(n, b));
        Ok(PmMaker {
            cfg,
            n,
            b,
            residual,
            in_u: vec![true; n],
            u_len: n,
            deg_u: vec![0; n],
            seen: vec![0; n],
            matching: Vec::new(),
            stage: if tiny.is_some() { 0 } else { 1 },
            core: None,
            residual_set: Vec::new(),
            tiny,
            stage_moves: [0; 3],
        })
    }

    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn stage1_matching(&self) -> &[Edge] {
        &self.matching
    }

    fn sync(&mut self, state: &GameState) {
        for v in 0..self.n {
            let nb = state.breaker_neighbors(v);
            if self.in_u[v] {
                for &u in &nb[self.seen[v]..] {
                    if self.in_u[u as usize] {
                        self.deg_u[v] += 1;
                    }
                }
            }
            self.seen[v] = nb.len();
        }
    }

    fn remove_from_u(&mut self, state: &GameState, v: usize) {
        self.in_u[v] = false;
        self.u_len -= 1;
        for &u in &state.breaker_neighbors(v)[..self.seen[v]] {
            if self.in_u[u as usize] {
                self.deg_u[u as usize] -= 1;
            }
        }
    }

    fn u_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.in_u[v]).collect()
    }

    /// Stage 1 continues while `|U| - 2 >= m` and `Δ(B[U]) + b <= δ(|U| - 2)`.
    fn stage1_continues(&self) -> bool {
        let next = self.u_len as f64 - 2.0;
        let max = (0..self.n).filter(|&v| self.in_u[v]).map(|v| self.deg_u[v]).max().unwrap_or(0);
        self.u_len >= self.residual + 2 && (max + self.b) as f64 <= self.cfg.delta * next
    }

    fn step(&mut self, state: &GameState) -> Result<(Edge, Notes), Forfeit> {
        let mut notes = Notes::new();
        if let Some(tiny) = self.tiny.as_mut() {
            let limit = self.n / 2 + self.n;
            if let Some((e, k)) = tiny.best_move(state, limit) {
                notes.insert("stage".into(), 0.0);
                notes.insert("forced_in".into(), k as f64);
                return Ok((e, notes));
            }
            self.tiny = None;
            self.stage = 1;
        }
        self.sync(state);
        if self.stage == 1 && !self.stage1_continues() {
            self.stage = 2;
            self.residual_set = self.u_vertices();
            let mut hcfg = self.cfg.hnf.clone();
            hcfg.check_preconditions = true;
            hcfg.delta = self.cfg.delta;
            let core = HnfCore::new(state, &self.residual_set, hcfg)
                .map_err(|e| Forfeit::new(2, e.to_string()))?;
            self.core = Some(core);
        }
        if self.stage == 1 {
            let u = self.u_vertices();
            let e = pick(state, &u, &self.deg_u)?;
            let (v, w) = e.endpoints();
            notes.insert("stage".into(), 1.0);
            notes.insert("v".into(), v as f64);
            notes.insert("w".into(), w as f64);
            self.remove_from_u(state, v);
            self.remove_from_u(state, w);
            self.matching.push(e);
            return Ok((e, notes));
        }
        let core = self.core.as_mut().expect("stage 2 core");
        let (e, mut notes) = core.next_edge(state)?;
        notes.insert("stage".into(), 2.0);
        Ok((e, notes))
    }
}

impl MakerStrategy for PmMaker {
    fn name(&self) -> String {
        "pm".into()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        match self.step(state) {
            Ok((edge, notes)) => {
                self.stage_moves[self.stage as usize] += 1;
                MakerAction::Claim { edge, notes }
            }
            Err(f) => MakerAction::Forfeit(f),
        }
    }

    fn certificate(&self, state: &GameState) -> Option<Vec<Edge>> {
        match self.stage {
            0 => {
                let all: Vec<usize> = (0..self.n).collect();
                maker_matching(state, &all)
            }
            1 => None,
            _ => {
                let mut cert = maker_matching(state, &self.residual_set)?;
                cert.extend_from_slice(&self.matching);
                Some(cert)
            }
        }
    }

    fn stats(&self) -> Notes {
        let mut out = Notes::new();
        out.insert("stage1_moves".into(), self.stage_moves[1] as f64);
        out.insert("stage2_moves".into(), self.stage_moves[2] as f64);
        if self.stage_moves[0] > 0 {
            out.insert("exact_moves".into(), self.stage_moves[0] as f64);
        }
        out.insert("residual".into(), self.residual_set.len() as f64);
        if let Some(c) = &self.core {
            for (i, m) in c.stage_moves().iter().enumerate() {
                out.insert(format!("hnf_stage{}_moves", i + 1), *m as f64);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Player;

    #[test]
    fn stage1_pick_follows_breaker_degrees() {
        let mut s = GameState::new(6, 1).unwrap();
        s.force_claim(Player::Breaker, &[Edge::new(0, 4)]).unwrap();
        let u: Vec<usize> = (0..6).collect();
        // v = 0; its best partner 4 is taken, so w = 1.
        assert_eq!(pick(&s, &u, &[3, 1, 0, 0, 2, 0]).unwrap(), Edge::new(0, 1));
        let fresh = GameState::new(6, 1).unwrap();
        assert_eq!(pm_stage1_move(&fresh, &u).unwrap(), Edge::new(0, 1));
        let mut blocked = GameState::new(4, 1).unwrap();
        let all: Vec<Edge> = blocked.free_edges().collect();
        blocked.force_claim(Player::Breaker, &all).unwrap();
        assert!(pm_stage1_move(&blocked, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn stage1_counts_breaker_degree_inside_u_only() {
        let mut s = GameState::new(8, 1).unwrap();
        s.force_claim(Player::Breaker, &[Edge::new(1, 6), Edge::new(1, 7), Edge::new(2, 3)]).unwrap();
        assert_eq!(pm_stage1_move(&s, &[0, 1, 2, 3, 4, 5]).unwrap(), Edge::new(2, 0));
    }

    #[test]
    fn bias_limit_is_enforced() {
        assert_eq!(bias_limit(1000, 0.1), 1);
        assert!(PmMaker::new(PmConfig::default(), 200, 2).is_err());
        assert!(PmMaker::new(PmConfig::default(), 200, 1).is_ok());
        assert!(PmMaker::new(PmConfig::default(), 7, 1).is_err());
    }

    #[test]
    fn six_vertices_one_bias_wins_in_four_against_every_breaker() {
        let mut solver = TinySolver::new(6, 1);
        let s = GameState::new(6, 1).unwrap();
        let (m, b) = solver.masks(&s);
        assert!(solver.breaker_loses(m, b, 4));
        assert!(!solver.breaker_loses(m, b, 3));
    }
}
