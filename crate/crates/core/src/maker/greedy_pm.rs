//! Naive perfect matching Maker: matches two unmatched vertices whenever a
//! free pair exists, otherwise reroutes through a matched edge `{a,b}` by
//! claiming `{x,a}` and then `{y,b}`.

use crate::board::{Edge, GameState};
use crate::engine::{Forfeit, MakerAction, MakerStrategy, Notes};

#[derive(Clone, Debug, Default)]
pub struct GreedyPmMaker {
    mate: Vec<Option<usize>>,
    /// `(x, a)`: `{x,a}` is claimed, waiting for `{y, mate(a)}`.
    pending: Option<(usize, usize)>,
}

impl GreedyPmMaker {
    pub fn new() -> Self {
        Self::default()
    }

    fn unmatched(&self) -> Vec<usize> {
        (0..self.mate.len()).filter(|&v| self.mate[v].is_none()).collect()
    }

    fn finish_augment(&mut self, x: usize, a: usize, y: usize) {
        let b = self.mate[a].expect("matched");
        self.mate[x] = Some(a);
        self.mate[a] = Some(x);
        self.mate[y] = Some(b);
        self.mate[b] = Some(y);
    }

    /// Matches pairs of unmatched vertices already joined by Maker.
    fn absorb(&mut self, state: &GameState) {
        for v in 0..self.mate.len() {
            if self.mate[v].is_some() {
                continue;
            }
            if let Some(&u) = state
                .maker_neighbors(v)
                .iter()
                .find(|&&u| u as usize != v && self.mate[u as usize].is_none())
            {
                self.mate[v] = Some(u as usize);
                self.mate[u as usize] = Some(v);
            }
        }
    }

    fn step(&mut self, state: &GameState) -> Result<(Edge, Notes), Forfeit> {
        let mut notes = Notes::new();
        notes.insert("stage".into(), 1.0);
        let free_u = self.unmatched();
        if let Some((x, a)) = self.pending.take() {
            let b = self.mate[a].expect("matched");
            if self.mate[x].is_none() {
                if let Some(&y) = free_u.iter().find(|&&y| y != x && state.pair_free(y, b)) {
                    self.finish_augment(x, a, y);
                    notes.insert("stage".into(), 2.0);
                    return Ok((Edge::new(y, b), notes));
                }
            }
        }
        for (i, &x) in free_u.iter().enumerate() {
            if let Some(&y) = free_u[i + 1..].iter().find(|&&y| state.pair_free(x, y)) {
                self.mate[x] = Some(y);
                self.mate[y] = Some(x);
                return Ok((Edge::new(x, y), notes));
            }
        }
        notes.insert("stage".into(), 2.0);
        for &x in &free_u {
            for a in 0..self.mate.len() {
                let Some(b) = self.mate[a] else { continue };
                let xa = Edge::new(x, a);
                let ys: Vec<usize> = free_u.iter().copied().filter(|&y| y != x && state.pair_free(y, b)).collect();
                if ys.is_empty() {
                    continue;
                }
                if state.is_maker(xa) {
                    self.finish_augment(x, a, ys[0]);
                    return Ok((Edge::new(ys[0], b), notes));
                }
                if state.is_free(xa) {
                    self.pending = Some((x, a));
                    return Ok((xa, notes));
                }
            }
        }
        Err(Forfeit::new(2, format!("{} unmatched vertices and no augmenting pair", free_u.len())))
    }
}

impl MakerStrategy for GreedyPmMaker {
    fn name(&self) -> String {
        "greedy_pm".into()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        if self.mate.len() != state.n() {
            if state.n() % 2 == 1 {
                return MakerAction::Forfeit(Forfeit::new(0, "odd number of vertices"));
            }
            self.mate = vec![None; state.n()];
        }
        self.absorb(state);
        match self.step(state) {
            Ok((edge, notes)) => MakerAction::Claim { edge, notes },
            Err(f) => MakerAction::Forfeit(f),
        }
    }

    fn certificate(&self, state: &GameState) -> Option<Vec<Edge>> {
        let mut mate = self.mate.clone();
        if mate.len() != state.n() {
            return None;
        }
        // Pick up the edge just claimed when it closes a pair.
        for v in 0..mate.len() {
            if mate[v].is_none() {
                let u = state.maker_neighbors(v).iter().map(|&u| u as usize).find(|&u| mate[u].is_none())?;
                mate[v] = Some(u);
                mate[u] = Some(v);
            }
        }
        Some(
            (0..mate.len())
                .filter_map(|v| mate[v].filter(|&u| v < u).map(|u| Edge::new(v, u)))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Player;
    use crate::engine::verify_certificate;
    use crate::GoalKind;

    #[test]
    fn reroutes_through_a_matched_edge() {
        let mut s = GameState::new(4, 1).unwrap();
        let mut m = GreedyPmMaker::new();
        s.force_claim(Player::Maker, &[Edge::new(0, 1)]).unwrap();
        s.force_claim(Player::Breaker, &[Edge::new(2, 3)]).unwrap();
        m.mate = vec![None; 4];
        m.absorb(&s);
        let (e1, _) = m.step(&s).unwrap();
        assert_eq!(e1, Edge::new(0, 2));
        s.force_claim(Player::Maker, &[e1]).unwrap();
        let (e2, _) = m.step(&s).unwrap();
        assert_eq!(e2, Edge::new(1, 3));
        s.force_claim(Player::Maker, &[e2]).unwrap();
        let cert = m.certificate(&s).unwrap();
        assert!(verify_certificate(&s, GoalKind::PerfectMatching, &cert));
    }
}
