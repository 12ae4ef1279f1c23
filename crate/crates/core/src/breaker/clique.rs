//! Delay strategies: Breaker claims a clique on vertices Maker has not
//! (or has barely) touched and keeps it at its target size.

use crate::board::{Edge, GameState};
use crate::engine::{BreakerAction, BreakerStrategy, Notes};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CliqueMode {
    /// Target `⌊b/2⌋`; a member leaves once Maker touches it.
    Pm,
    /// Target `b`; a member leaves once its Maker degree reaches 2.
    Hc,
}

impl CliqueMode {
    pub fn name(self) -> &'static str {
        match self {
            CliqueMode::Pm => "clique_pm",
            CliqueMode::Hc => "clique_hc",
        }
    }
}

/// Largest `u >= 0` with `C(u+1, 2) + (u+1) c <= b`; 0 when none fits.
pub fn delay_batch_size(c: usize, b: usize) -> usize {
    let cost = |u: usize| (u + 1) * u / 2 + (u + 1) * c;
    let mut u = 0;
    while cost(u + 1) <= b {
        u += 1;
    }
    u
}

#[derive(Clone, Debug)]
pub struct CliqueBreaker {
    mode: CliqueMode,
    b: usize,
    target: usize,
    clique: Vec<usize>,
    /// Maker degree of each member when it joined.
    joined_dm: Vec<usize>,
    touched: Vec<bool>,
    touched_count: usize,
    max_size: usize,
}

impl CliqueBreaker {
    pub fn new(mode: CliqueMode, b: usize) -> Self {
        let target = match mode {
            CliqueMode::Pm => (b / 2).max(1),
            CliqueMode::Hc => b.max(1),
        };
        CliqueBreaker {
            mode,
            b,
            target,
            clique: Vec::new(),
            joined_dm: Vec::new(),
            touched: Vec::new(),
            touched_count: 0,
            max_size: 0,
        }
    }

    pub fn clique(&self) -> &[usize] {
        &self.clique
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Vertices that were ever clique members.
    pub fn touched(&self) -> usize {
        self.touched_count
    }

    fn leaves(&self, state: &GameState, i: usize) -> bool {
        let dm = state.deg_m(self.clique[i]);
        match self.mode {
            CliqueMode::Pm => dm > self.joined_dm[i],
            CliqueMode::Hc => dm >= 2,
        }
    }

    fn eligible(&self, state: &GameState, x: usize, member: &[bool]) -> bool {
        if member[x] {
            return false;
        }
        let limit = match self.mode {
            CliqueMode::Pm => 1,
            CliqueMode::Hc => 2,
        };
        state.deg_m(x) < limit && !state.maker_neighbors(x).iter().any(|&u| member[u as usize])
    }

    /// Candidates by Maker degree, then index.
    fn candidates(&self, state: &GameState, member: &[bool]) -> Vec<usize> {
        let mut c: Vec<usize> = (0..state.n()).filter(|&x| self.eligible(state, x, member)).collect();
        c.sort_by_key(|&x| (state.deg_m(x), x));
        c
    }

    /// The edges for one Breaker turn.
    pub fn plan(&mut self, state: &GameState) -> Vec<Edge> {
        let n = state.n();
        if self.touched.len() != n {
            self.touched = vec![false; n];
        }
        let mut keep = Vec::new();
        let mut keep_dm = Vec::new();
        for i in 0..self.clique.len() {
            if !self.leaves(state, i) {
                keep.push(self.clique[i]);
                keep_dm.push(self.joined_dm[i]);
            }
        }
        self.clique = keep;
        self.joined_dm = keep_dm;
        let budget = state.free_count().min(self.b);
        let mut member = vec![false; n];
        for &v in &self.clique {
            member[v] = true;
        }
        let half = match self.mode {
            CliqueMode::Pm => self.target,
            CliqueMode::Hc => (self.b / 2).max(1),
        };
        let want_new = if self.clique.len() < half {
            (delay_batch_size(self.clique.len(), self.b) + 1).min(self.target - self.clique.len())
        } else if self.clique.len() < self.target {
            1
        } else {
            0
        };
        let mut out: Vec<Edge> = Vec::new();
        let mut added = 0;
        if want_new > 0 {
            for x in self.candidates(state, &member) {
                if added == want_new {
                    break;
                }
                if !self.eligible(state, x, &member) {
                    continue;
                }
                let need: Vec<Edge> = self
                    .clique
                    .iter()
                    .map(|&c| Edge::new(c, x))
                    .filter(|&e| !state.is_breaker(e))
                    .collect();
                if need.iter().any(|&e| !state.is_free(e)) || out.len() + need.len() > budget {
                    continue;
                }
                out.extend(need);
                self.clique.push(x);
                self.joined_dm.push(state.deg_m(x));
                member[x] = true;
                if !self.touched[x] {
                    self.touched[x] = true;
                    self.touched_count += 1;
                }
                added += 1;
            }
        }
        self.max_size = self.max_size.max(self.clique.len());
        super::fill_lowest(state, &member, &mut out, budget);
        out
    }

    /// Every pair inside the clique belongs to Breaker (after `edges`).
    pub fn clique_is_complete(&self, state: &GameState) -> bool {
        self.clique.iter().enumerate().all(|(i, &u)| {
            self.clique[i + 1..].iter().all(|&v| state.is_breaker(Edge::new(u, v)))
        })
    }
}

impl BreakerStrategy for CliqueBreaker {
    fn name(&self) -> String {
        self.mode.name().into()
    }

    fn next_move(&mut self, state: &GameState) -> BreakerAction {
        let edges = self.plan(state);
        let mut notes = Notes::new();
        notes.insert("clique".into(), self.clique.len() as f64);
        notes.insert("touched".into(), self.touched_count as f64);
        for (i, &v) in self.clique.iter().enumerate() {
            notes.insert(format!("c{i}"), v as f64);
        }
        BreakerAction::Claim { edges, notes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Player;

    #[test]
    fn batch_sizes() {
        assert_eq!(delay_batch_size(0, 12), 4);
        assert_eq!(delay_batch_size(5, 12), 1);
        // Two fresh vertices cost C(2,2) = 1 edge.
        assert_eq!(delay_batch_size(0, 1), 1);
        assert_eq!(delay_batch_size(1, 1), 0);
        assert_eq!(delay_batch_size(12, 12), 0);
    }

    #[test]
    fn first_move_claims_k5_and_filler() {
        let s = GameState::new(100, 12).unwrap();
        let mut br = CliqueBreaker::new(CliqueMode::Pm, 12);
        let edges = br.plan(&s);
        assert_eq!(edges.len(), 12);
        assert_eq!(br.clique(), &[0, 1, 2, 3, 4]);
        let internal = edges.iter().filter(|e| e.u < 5 && e.v < 5).count();
        assert_eq!(internal, 10);
        assert!(edges[10..].iter().all(|e| e.u >= 5));
    }

    #[test]
    fn replaces_touched_members() {
        let mut s = GameState::new(40, 12).unwrap();
        let mut br = CliqueBreaker::new(CliqueMode::Pm, 12);
        for _ in 0..3 {
            let e = br.plan(&s);
            s.force_claim(Player::Breaker, &e).unwrap();
        }
        assert_eq!(br.clique().len(), 6);
        assert!(br.clique_is_complete(&s));
        s.force_claim(Player::Maker, &[Edge::new(0, 30)]).unwrap();
        let e = br.plan(&s);
        s.force_claim(Player::Breaker, &e).unwrap();
        assert_eq!(br.clique().len(), 6);
        assert!(!br.clique().contains(&0));
        assert!(br.clique_is_complete(&s));
    }

    #[test]
    fn hc_mode_keeps_degree_one_members() {
        let mut s = GameState::new(60, 8).unwrap();
        let mut br = CliqueBreaker::new(CliqueMode::Hc, 8);
        let e = br.plan(&s);
        s.force_claim(Player::Breaker, &e).unwrap();
        let size = br.clique().len();
        s.force_claim(Player::Maker, &[Edge::new(0, 50)]).unwrap();
        let e = br.plan(&s);
        s.force_claim(Player::Breaker, &e).unwrap();
        assert!(br.clique().contains(&0));
        assert!(br.clique().len() > size);
        s.force_claim(Player::Maker, &[Edge::new(0, 51)]).unwrap();
        br.plan(&s);
        assert!(!br.clique().contains(&0));
    }

    #[test]
    fn no_candidates_means_filler_only() {
        let mut s = GameState::new(6, 2).unwrap();
        let m: Vec<Edge> = (0..3).map(|i| Edge::new(2 * i, 2 * i + 1)).collect();
        s.force_claim(Player::Maker, &m).unwrap();
        let mut br = CliqueBreaker::new(CliqueMode::Pm, 2);
        let e = br.plan(&s);
        assert_eq!(e.len(), 2);
        assert!(br.clique().is_empty());
    }
}
