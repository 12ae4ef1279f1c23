//! A collection of vertex-disjoint Maker paths with the endpoint multiset
//! `End` (a path of length 0 contributes its vertex twice).

use crate::board::{Edge, GameState};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct PathSystem {
    n: usize,
    paths: Vec<Vec<usize>>,
    path_of: Vec<usize>,
    pos: Vec<usize>,
    weight: Vec<u8>,
    end_total: usize,
    /// `Σ weight(u)` over Breaker neighbours `u` of each vertex.
    end_deg_b: Vec<i64>,
    seen_breaker: Vec<usize>,
    forgotten: Vec<Edge>,
    live: usize,
}

impl PathSystem {
    /// Every vertex of `vertices` as a path of length 0.
    pub fn new(n: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut ps = PathSystem {
            n,
            paths: Vec::new(),
            path_of: vec![NONE; n],
            pos: vec![NONE; n],
            weight: vec![0; n],
            end_total: 0,
            end_deg_b: vec![0; n],
            seen_breaker: vec![0; n],
            forgotten: Vec::new(),
            live: 0,
        };
        for v in vertices {
            ps.insert_path(vec![v]);
        }
        ps
    }

    /// Folds Breaker edges claimed since the last call into the
    /// endpoint-restricted degrees. Must be called before reading them.
    pub fn absorb_breaker(&mut self, state: &GameState) {
        for v in 0..self.n {
            let nb = state.breaker_neighbors(v);
            for &u in &nb[self.seen_breaker[v]..] {
                self.end_deg_b[v] += self.weight[u as usize] as i64;
            }
            self.seen_breaker[v] = nb.len();
        }
    }

    fn set_weight(&mut self, v: usize, w: u8, state: &GameState) {
        let old = self.weight[v];
        if old == w {
            return;
        }
        let delta = w as i64 - old as i64;
        for &u in state.breaker_neighbors(v).iter().take(self.seen_breaker[v]) {
            self.end_deg_b[u as usize] += delta;
        }
        self.end_total = self.end_total + w as usize - old as usize;
        self.weight[v] = w;
    }

    fn insert_path(&mut self, p: Vec<usize>) -> usize {
        let id = self.paths.len();
        for (i, &v) in p.iter().enumerate() {
            self.path_of[v] = id;
            self.pos[v] = i;
        }
        let (a, z) = (p[0], *p.last().unwrap());
        if a == z {
            self.weight[a] = 2;
            self.end_total += 2;
        } else {
            self.weight[a] = 1;
            self.weight[z] = 1;
            self.end_total += 2;
        }
        self.paths.push(p);
        self.live += 1;
        id
    }

    /// Replaces the paths `old` by `new` (covering the same vertices or a
    /// subset/superset of system vertices) and updates the weights.
    pub fn replace(&mut self, old: &[usize], new: Vec<Vec<usize>>, state: &GameState) -> Vec<usize> {
        let mut touched = Vec::new();
        for &id in old {
            let p = std::mem::take(&mut self.paths[id]);
            assert!(!p.is_empty(), "path {id} is not live");
            for &v in &p {
                self.path_of[v] = NONE;
                self.pos[v] = NONE;
            }
            touched.extend(p);
            self.live -= 1;
        }
        let mut ids = Vec::new();
        for p in new {
            let id = self.paths.len();
            for (i, &v) in p.iter().enumerate() {
                self.path_of[v] = id;
                self.pos[v] = i;
            }
            self.paths.push(p);
            self.live += 1;
            ids.push(id);
        }
        for &v in &touched {
            let w = self.weight_for(v);
            self.set_weight(v, w, state);
        }
        for &id in &ids {
            let p = self.paths[id].clone();
            for v in [p[0], *p.last().unwrap()] {
                let w = self.weight_for(v);
                self.set_weight(v, w, state);
            }
        }
        ids
    }

    fn weight_for(&self, v: usize) -> u8 {
        let id = self.path_of[v];
        if id == NONE {
            return 0;
        }
        let p = &self.paths[id];
        if p.len() == 1 {
            2
        } else if self.pos[v] == 0 || self.pos[v] == p.len() - 1 {
            1
        } else {
            0
        }
    }

    /// Removes `v` (a path of length 0) from the system.
    pub fn remove_singleton(&mut self, v: usize, state: &GameState) {
        let id = self.path_of[v];
        assert!(id != NONE && self.paths[id].len() == 1);
        self.replace(&[id], Vec::new(), state);
    }

    /// Joins the paths ending at `u` and `w` through the new edge `{u,w}`.
    pub fn join(&mut self, u: usize, w: usize, state: &GameState) -> usize {
        let (pu, pw) = (self.path_of[u], self.path_of[w]);
        assert!(pu != pw && pu != NONE && pw != NONE, "join {u} {w}");
        let mut a = self.oriented_to_end(pu, u);
        let b = self.oriented_from_start(pw, w);
        a.extend(b);
        self.replace(&[pu, pw], vec![a], state)[0]
    }

    /// Path `id` as a sequence ending at `v`.
    pub fn oriented_to_end(&self, id: usize, v: usize) -> Vec<usize> {
        let p = &self.paths[id];
        if *p.last().unwrap() == v {
            p.clone()
        } else {
            debug_assert_eq!(p[0], v);
            p.iter().rev().copied().collect()
        }
    }

    pub fn oriented_from_start(&self, id: usize, v: usize) -> Vec<usize> {
        let mut p = self.oriented_to_end(id, v);
        p.reverse();
        p
    }

    pub fn forget(&mut self, e: Edge) {
        self.forgotten.push(e);
    }

    pub fn forgotten(&self) -> &[Edge] {
        &self.forgotten
    }

    pub fn weight(&self, v: usize) -> u8 {
        self.weight[v]
    }

    pub fn is_endpoint(&self, v: usize) -> bool {
        self.weight[v] > 0
    }

    /// `|End|` counted with multiplicity.
    pub fn end_total(&self) -> usize {
        self.end_total
    }

    /// `d_B(v, End)` with multiplicity.
    pub fn end_deg_b(&self, v: usize) -> i64 {
        self.end_deg_b[v]
    }

    pub fn path_count(&self) -> usize {
        self.live
    }

    pub fn path_id(&self, v: usize) -> Option<usize> {
        (self.path_of[v] != NONE).then_some(self.path_of[v])
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn path(&self, id: usize) -> &[usize] {
        &self.paths[id]
    }

    pub fn path_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.paths.len()).filter(|&i| !self.paths[i].is_empty())
    }

    /// The other endpoint of `v`'s path (`v` itself for length 0).
    pub fn other_end(&self, v: usize) -> usize {
        let p = &self.paths[self.path_of[v]];
        if p[0] == v {
            *p.last().unwrap()
        } else {
            p[0]
        }
    }

    /// Endpoint vertices (each once), ascending.
    pub fn endpoints(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.weight[v] > 0).collect()
    }

    /// `S = Σ_{v∈End} d_B(v,End)`, `D = S/|End|` and `Δ = max d_B(v,End)`.
    pub fn end_stats(&self) -> (f64, i64) {
        let mut s = 0i64;
        let mut max = 0i64;
        for v in 0..self.n {
            if self.weight[v] > 0 {
                s += self.weight[v] as i64 * self.end_deg_b[v];
                max = max.max(self.end_deg_b[v]);
            }
        }
        let avg = if self.end_total == 0 { 0.0 } else { s as f64 / self.end_total as f64 };
        (avg, max)
    }

    /// Checks disjointness, Maker ownership of path edges, weights and
    /// the endpoint-restricted Breaker degrees.
    pub fn validate(&self, state: &GameState) -> Result<(), String> {
        let mut seen = vec![false; self.n];
        let mut total = 0usize;
        for id in self.path_ids() {
            let p = &self.paths[id];
            for (i, &v) in p.iter().enumerate() {
                if seen[v] {
                    return Err(format!("vertex {v} on two paths"));
                }
                seen[v] = true;
                if self.path_of[v] != id || self.pos[v] != i {
                    return Err(format!("index of vertex {v} is stale"));
                }
            }
            for w in p.windows(2) {
                let e = Edge::new(w[0], w[1]);
                if !state.is_maker(e) {
                    return Err(format!("path edge {e} is not Maker's"));
                }
                if self.forgotten.contains(&e) {
                    return Err(format!("path edge {e} was forgotten"));
                }
            }
            total += 2;
        }
        if total != self.end_total {
            return Err(format!("|End| = {} but {} paths", self.end_total, total / 2));
        }
        for v in 0..self.n {
            if self.weight[v] != self.weight_for(v) {
                return Err(format!("weight of {v} is {}", self.weight[v]));
            }
            let expect: i64 = state
                .breaker_neighbors(v)
                .iter()
                .take(self.seen_breaker[v])
                .map(|&u| self.weight[u as usize] as i64)
                .sum();
            if expect != self.end_deg_b[v] {
                return Err(format!("d_B({v}, End) is {} not {expect}", self.end_deg_b[v]));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Player;

    #[test]
    fn joins_update_the_endpoint_multiset() {
        let mut s = GameState::new(6, 1).unwrap();
        s.force_claim(Player::Breaker, &[Edge::new(0, 5)]).unwrap();
        let mut ps = PathSystem::new(6, 0..6);
        ps.absorb_breaker(&s);
        assert_eq!(ps.end_total(), 12);
        assert_eq!(ps.end_deg_b(0), 2);
        s.force_claim(Player::Maker, &[Edge::new(5, 1)]).unwrap();
        ps.join(5, 1, &s);
        assert_eq!(ps.end_total(), 10);
        assert_eq!(ps.end_deg_b(0), 1);
        s.force_claim(Player::Maker, &[Edge::new(1, 2)]).unwrap();
        ps.join(1, 2, &s);
        assert_eq!(ps.weight(1), 0);
        assert_eq!(ps.other_end(5), 2);
        ps.validate(&s).unwrap();
        s.force_claim(Player::Breaker, &[Edge::new(2, 3)]).unwrap();
        ps.absorb_breaker(&s);
        assert_eq!(ps.end_deg_b(2), 2);
        assert_eq!(ps.end_deg_b(3), 1);
        ps.validate(&s).unwrap();
    }
}
