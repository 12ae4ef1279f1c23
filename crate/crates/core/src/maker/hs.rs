//! Hamilton cycle Maker for medium bias, in three stages: build `L`
//! Hamilton-connected expanders of order `t` on Breaker-independent sets
//! (odd moves) while pairing path endpoints by Breaker degree (even moves);
//! keep pairing until `L` paths remain; then hook the paths into the
//! expanders circularly, most threatened endpoint first.

use serde::{Deserialize, Serialize};

use crate::board::{Edge, GameState};
use crate::boxgame::max_box_load;
use crate::engine::{Forfeit, MakerAction, MakerStrategy, Notes};
use crate::graph::Graph;
use crate::maker::hamconn::{ExpanderBuilder, HamconnConfig, MAX_ORDER};
use crate::maker::partition::equitable_partition;
use crate::maker::paths::PathSystem;
use crate::maker::posa;
use crate::maker::MakerError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HsConfig {
    /// Number of expanders; `None` means `⌈13 b ln n⌉`.
    pub expanders: Option<usize>,
    /// Expander order; `None` means `⌈b ln² n / 2⌉`.
    pub order: Option<usize>,
    /// Caps `L` so that the expanders cover at most this fraction of `V`.
    pub max_cover: Option<f64>,
    pub max_expanders: Option<usize>,
    pub hamconn: HamconnConfig,
    pub validate: bool,
}

impl Default for HsConfig {
    fn default() -> Self {
        HsConfig {
            expanders: None,
            order: None,
            max_cover: None,
            max_expanders: None,
            hamconn: HamconnConfig::default(),
            validate: true,
        }
    }
}

impl HsConfig {
    /// At most 6 expanders of order 24 and minimum degree 6, covering at
    /// most a third of the board.
    pub fn desk() -> Self {
        HsConfig {
            expanders: None,
            order: Some(24),
            max_cover: Some(1.0 / 3.0),
            max_expanders: Some(6),
            hamconn: HamconnConfig { min_degree: 6, ..HamconnConfig::default() },
            validate: true,
        }
    }

    /// `(L, t)` for a board of order `n` and bias `b`.
    pub fn sizes(&self, n: usize, b: usize) -> (usize, usize) {
        let ln = (n as f64).ln();
        let t = self.order.unwrap_or_else(|| (b as f64 * ln * ln / 2.0).ceil() as usize);
        let mut l = self.expanders.unwrap_or_else(|| (13.0 * b as f64 * ln).ceil() as usize);
        if let Some(f) = self.max_cover {
            l = l.min((f * n as f64 / t as f64).floor() as usize);
        }
        if let Some(m) = self.max_expanders {
            l = l.min(m);
        }
        (l.max(1), t)
    }
}

/// One endpoint-to-expander connection of the last stage.
#[derive(Clone, Debug)]
struct Slot {
    v: usize,
    expander: usize,
    half: Vec<usize>,
    target: Option<usize>,
}

pub struct HsMaker {
    cfg: HsConfig,
    n: usize,
    b: usize,
    l: usize,
    t: usize,
    ps: Option<PathSystem>,
    expanders: Vec<ExpanderBuilder>,
    stage: u32,
    stage1_moves: usize,
    stage_moves: [usize; 3],
    paths: Vec<Vec<usize>>,
    slots: Vec<Slot>,
    cycle: Option<Vec<usize>>,
    stage2_end_deg: Option<usize>,
    box_size: Option<usize>,
}

impl HsMaker {
    pub fn new(cfg: HsConfig, n: usize, b: usize) -> Result<Self, MakerError> {
        let (l, t) = cfg.sizes(n, b);
        if t > MAX_ORDER || t < 4 {
            return Err(MakerError::PreconditionViolated(format!("expander order {t} outside 4..={MAX_ORDER}")));
        }
        if l * t + 2 * l > n {
            return Err(MakerError::PreconditionViolated(format!("{l} expanders of order {t} do not fit on {n} vertices")));
        }
        Ok(HsMaker {
            cfg,
            n,
            b,
            l,
            t,
            ps: None,
            expanders: Vec::new(),
            stage: 1,
            stage1_moves: 0,
            stage_moves: [0; 3],
            paths: Vec::new(),
            slots: Vec::new(),
            cycle: None,
            stage2_end_deg: None,
            box_size: None,
        })
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.l, self.t)
    }

    /// `b H_{2L}`, the most Breaker can pile on one endpoint box in the
    /// last stage.
    pub fn box_load(&self) -> f64 {
        max_box_load(2 * self.l as u64, self.b as u64)
    }

    /// Smallest box (free edges from an endpoint to its expander half) at
    /// the start of the last stage.
    pub fn box_size(&self) -> Option<usize> {
        self.box_size
    }

    pub fn stage2_end_degree(&self) -> Option<usize> {
        self.stage2_end_deg
    }

    /// `24 b ln n`.
    pub fn stage2_end_cap(&self) -> f64 {
        24.0 * self.b as f64 * (self.n as f64).ln()
    }

    fn ps(&self) -> &PathSystem {
        self.ps.as_ref().expect("initialised")
    }

    /// Chooses `t` Maker-isolated path-system vertices independent in
    /// Breaker's graph and moves them to a new expander.
    fn select_expander(&mut self, state: &GameState) -> Result<(), Forfeit> {
        let ps = self.ps();
        let isolated: Vec<usize> = ps.path_ids().filter(|&id| ps.path(id).len() == 1).map(|id| ps.path(id)[0]).collect();
        let conflict = Graph::from_edges(self.n, state.breaker_edges());
        let max_deg = isolated
            .iter()
            .map(|&v| state.breaker_neighbors(v).iter().filter(|&&u| ps.path_id(u as usize).is_some_and(|id| ps.path(id).len() == 1)).count())
            .max()
            .unwrap_or(0);
        let part = equitable_partition(&isolated, &conflict, max_deg + 1)
            .map_err(|e| Forfeit::new(1, format!("expander selection: {e}")))?;
        let class = part
            .classes
            .iter()
            .find(|c| c.len() >= self.t)
            .ok_or_else(|| Forfeit::new(1, format!("no independent set of {} isolated vertices among {}", self.t, isolated.len())))?;
        let mut chosen = class.clone();
        chosen.sort_unstable();
        chosen.truncate(self.t);
        let ps = self.ps.as_mut().expect("initialised");
        for &v in &chosen {
            ps.remove_singleton(v, state);
        }
        let mut hc = self.cfg.hamconn.clone();
        hc.seed ^= self.expanders.len() as u64;
        self.expanders.push(ExpanderBuilder::new(self.n, &chosen, 2 * self.b, &hc));
        Ok(())
    }

    /// Next edge of the expander under construction, selecting new vertex
    /// sets as earlier expanders complete. `None` once all `L` are done.
    fn expander_move(&mut self, state: &GameState) -> Result<Option<Edge>, Forfeit> {
        loop {
            if let Some(ex) = self.expanders.last_mut() {
                if let Some(e) = ex.next_edge(state)? {
                    return Ok(Some(e));
                }
            }
            if self.expanders.len() == self.l {
                return Ok(None);
            }
            self.select_expander(state)?;
        }
    }

    fn expanders_done(&mut self, state: &GameState) -> bool {
        self.expanders.len() == self.l && self.expanders.iter_mut().all(|e| e.check(state))
    }

    /// Endpoint of largest Breaker degree joined to an endpoint of another
    /// path, largest Breaker degree first.
    fn pairing(&self, state: &GameState) -> Option<Edge> {
        let ps = self.ps();
        let ends = ps.endpoints();
        let mut order = ends.clone();
        order.sort_by_key(|&v| (std::cmp::Reverse(state.deg_b(v)), v));
        for &v in &order {
            let pv = ps.path_id(v);
            let w = ends
                .iter()
                .copied()
                .filter(|&w| w != v && ps.path_id(w) != pv && state.pair_free(v, w))
                .max_by_key(|&w| (state.deg_b(w), std::cmp::Reverse(w)));
            if let Some(w) = w {
                return Some(Edge::new(v, w));
            }
        }
        None
    }

    fn join(&mut self, e: Edge, state: &GameState) {
        let (v, w) = e.endpoints();
        self.ps.as_mut().expect("initialised").join(v, w, state);
    }

    fn start_stage3(&mut self, state: &GameState) {
        let ps = self.ps();
        let ids: Vec<usize> = ps.path_ids().collect();
        let paths = ids.iter().map(|&id| ps.path(id).to_vec()).collect();
        let end_deg = ps.endpoints().iter().map(|&v| state.deg_b(v)).max();
        self.paths = paths;
        self.stage2_end_deg = end_deg;
        let l = self.paths.len();
        let mut slots = Vec::with_capacity(2 * l);
        for i in 0..l {
            let vs = self.expanders[i].vertices();
            let h = vs.len().div_ceil(2);
            let (a, b) = (vs[..h].to_vec(), vs[h..].to_vec());
            slots.push(Slot { v: self.paths[i][0], expander: i, half: a, target: None });
            let next = &self.paths[(i + 1) % l];
            slots.push(Slot { v: next[next.len() - 1], expander: i, half: b, target: None });
        }
        self.box_size = slots
            .iter()
            .map(|s| s.half.iter().filter(|&&x| state.pair_free(s.v, x)).count())
            .min();
        self.slots = slots;
    }

    fn connect_move(&mut self, state: &GameState) -> Result<Edge, Forfeit> {
        let k = (0..self.slots.len())
            .filter(|&k| self.slots[k].target.is_none())
            .max_by_key(|&k| (state.deg_b(self.slots[k].v), std::cmp::Reverse(self.slots[k].v), std::cmp::Reverse(k)))
            .ok_or_else(|| Forfeit::new(3, "nothing left to connect"))?;
        let slot = &self.slots[k];
        let x = *slot
            .half
            .iter()
            .find(|&&x| state.pair_free(slot.v, x))
            .ok_or_else(|| Forfeit::new(3, format!("endpoint {} cut off from expander {}", slot.v, slot.expander)))?;
        let e = Edge::new(slot.v, x);
        self.slots[k].target = Some(x);
        if self.slots.iter().all(|s| s.target.is_some()) {
            self.cycle = Some(self.assemble(state, e)?);
        }
        Ok(e)
    }

    /// Paths and expander Hamilton paths in circular order. `last` is the
    /// edge about to be claimed.
    fn assemble(&self, state: &GameState, last: Edge) -> Result<Vec<usize>, Forfeit> {
        let mut probe = state.clone();
        probe.force_claim(crate::board::Player::Maker, &[last]).map_err(|e| Forfeit::new(3, e.to_string()))?;
        let l = self.paths.len();
        let mut order = Vec::with_capacity(self.n);
        for i in 0..l {
            order.extend(self.paths[i].iter().rev());
            let (a, b) = (self.slots[2 * i].target.expect("set"), self.slots[2 * i + 1].target.expect("set"));
            let hp = self.expanders[i]
                .hamilton_path(&probe, a, b)
                .ok_or_else(|| Forfeit::new(3, format!("expander {i} has no Hamilton path from {a} to {b}")))?;
            order.extend(hp);
        }
        Ok(order)
    }

    fn step(&mut self, state: &GameState) -> Result<(Edge, Notes), Forfeit> {
        if self.ps.is_none() {
            self.ps = Some(PathSystem::new(self.n, 0..self.n));
        }
        let ps = self.ps.as_mut().expect("initialised");
        ps.absorb_breaker(state);
        if self.cfg.validate {
            ps.validate(state).map_err(|e| Forfeit::new(self.stage, format!("path system invalid: {e}")))?;
        }
        let mut notes = Notes::new();
        if self.stage == 1 {
            let i = self.stage1_moves + 1;
            let pairing_turn = i % 2 == 0 && self.ps().path_count() > self.l;
            if pairing_turn {
                if let Some(e) = self.pairing(state) {
                    self.join(e, state);
                    self.stage1_moves = i;
                    notes.insert("stage".into(), 1.0);
                    return Ok((e, notes));
                }
            }
            if let Some(e) = self.expander_move(state)? {
                self.stage1_moves = i;
                notes.insert("stage".into(), 1.0);
                notes.insert("expander".into(), (self.expanders.len() - 1) as f64);
                return Ok((e, notes));
            }
            if !self.expanders_done(state) {
                return Err(Forfeit::new(1, "expanders incomplete"));
            }
            self.stage = 2;
        }
        if self.stage == 2 {
            if self.ps().path_count() > self.l {
                let e = self.pairing(state).ok_or_else(|| Forfeit::new(2, "no free edge between endpoints of different paths"))?;
                self.join(e, state);
                notes.insert("stage".into(), 2.0);
                return Ok((e, notes));
            }
            self.stage = 3;
            self.start_stage3(state);
        }
        let e = self.connect_move(state)?;
        notes.insert("stage".into(), 3.0);
        Ok((e, notes))
    }
}

impl MakerStrategy for HsMaker {
    fn name(&self) -> String {
        "hs".into()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        if self.cycle.is_some() {
            return MakerAction::Forfeit(Forfeit::new(3, "cycle already closed"));
        }
        match self.step(state) {
            Ok((edge, notes)) => {
                self.stage_moves[self.stage as usize - 1] += 1;
                MakerAction::Claim { edge, notes }
            }
            Err(f) => MakerAction::Forfeit(f),
        }
    }

    fn certificate(&self, _state: &GameState) -> Option<Vec<Edge>> {
        self.cycle.as_deref().map(posa::cycle_edges)
    }

    fn stats(&self) -> Notes {
        let mut out = Notes::new();
        for (i, m) in self.stage_moves.iter().enumerate() {
            out.insert(format!("stage{}_moves", i + 1), *m as f64);
        }
        out.insert("expanders".into(), self.l as f64);
        out.insert("expander_order".into(), self.t as f64);
        out.insert("expander_moves".into(), self.expanders.iter().map(|e| e.moves()).sum::<usize>() as f64);
        out.insert("box_load".into(), self.box_load());
        if let Some(s) = self.box_size {
            out.insert("box_size".into(), s as f64);
        }
        if let Some(d) = self.stage2_end_deg {
            out.insert("stage2_end_deg_b".into(), d as f64);
        }
        out.insert("stage2_end_cap".into(), self.stage2_end_cap());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_sizes() {
        let c = HsConfig::desk();
        assert_eq!(c.sizes(1000, 1), (6, 24));
        assert_eq!(c.sizes(100, 2), (1, 24));
        let p = HsConfig::default();
        let (l, t) = p.sizes(1000, 1);
        assert_eq!(l, 90);
        assert_eq!(t, 24);
    }

    #[test]
    fn rejects_oversized_plans() {
        assert!(HsMaker::new(HsConfig::default(), 1000, 1).is_err());
        assert!(HsMaker::new(HsConfig::desk(), 25, 1).is_err());
        assert!(HsMaker::new(HsConfig::desk(), 1000, 1).is_ok());
    }
}
