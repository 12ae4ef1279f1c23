//! Spanning tree Maker: always joins the most threatened component to
//! another one, so Maker's graph stays a forest.

use crate::board::{Edge, GameState};
use crate::engine::{Forfeit, MakerAction, MakerStrategy};

#[derive(Clone, Debug, Default)]
pub struct ConnectivityMaker {
    parent: Vec<usize>,
    members: Vec<Vec<usize>>,
    /// Free edges leaving the component, indexed by root.
    out: Vec<usize>,
    seen: Vec<usize>,
    tree: Vec<Edge>,
    components: usize,
}

impl ConnectivityMaker {
    pub fn new() -> Self {
        Self::default()
    }

    fn init(&mut self, n: usize) {
        self.parent = (0..n).collect();
        self.members = (0..n).map(|v| vec![v]).collect();
        self.out = vec![n - 1; n];
        self.seen = vec![0; n];
        self.components = n;
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn sync(&mut self, state: &GameState) {
        for v in 0..state.n() {
            let nb = state.breaker_neighbors(v);
            for &u in &nb[self.seen[v]..] {
                let u = u as usize;
                if v < u {
                    let (ru, rv) = (self.find(u), self.find(v));
                    if ru != rv {
                        self.out[ru] -= 1;
                        self.out[rv] -= 1;
                    }
                }
            }
            self.seen[v] = nb.len();
        }
    }

    fn lowest_free_between(&self, state: &GameState, a: usize, b: usize) -> Option<Edge> {
        let mut best: Option<Edge> = None;
        for &x in &self.members[a] {
            for &y in &self.members[b] {
                if state.pair_free(x, y) {
                    let e = Edge::new(x, y);
                    if best.is_none_or(|c| e < c) {
                        best = Some(e);
                    }
                }
            }
        }
        best
    }

    fn merge(&mut self, state: &GameState, e: Edge) {
        let (a, b) = (self.find(e.u as usize), self.find(e.v as usize));
        let mut cross = 0;
        for &x in &self.members[a] {
            for &y in &self.members[b] {
                cross += state.pair_free(x, y) as usize;
            }
        }
        let (big, small) = if self.members[a].len() >= self.members[b].len() { (a, b) } else { (b, a) };
        let moved = std::mem::take(&mut self.members[small]);
        self.members[big].extend(moved);
        self.parent[small] = big;
        self.out[big] = self.out[a] + self.out[b] - 2 * cross;
        self.components -= 1;
        self.tree.push(e);
    }

    /// The component to serve first and the edge joining it to its partner.
    pub fn choose(&mut self, state: &GameState) -> Result<Edge, Forfeit> {
        let roots: Vec<usize> = (0..state.n()).filter(|&v| self.parent[v] == v).collect();
        let key = |r: usize| (self.out[r], self.members[r].iter().min().copied().unwrap_or(usize::MAX));
        let mut order = roots.clone();
        order.sort_by_key(|&r| key(r));
        let first = order[0];
        for &r in &order[1..] {
            if let Some(e) = self.lowest_free_between(state, first, r) {
                return Ok(e);
            }
        }
        Err(Forfeit::new(1, format!("component of vertex {} is cut off", key(first).1)))
    }

    pub fn tree(&self) -> &[Edge] {
        &self.tree
    }
}

impl MakerStrategy for ConnectivityMaker {
    fn name(&self) -> String {
        "connectivity".into()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        if self.parent.len() != state.n() {
            self.init(state.n());
        }
        self.sync(state);
        if self.components == 1 {
            return MakerAction::Forfeit(Forfeit::new(1, "already spanning"));
        }
        match self.choose(state) {
            Ok(e) => {
                self.merge(state, e);
                MakerAction::claim(e)
            }
            Err(f) => MakerAction::Forfeit(f),
        }
    }

    fn certificate(&self, state: &GameState) -> Option<Vec<Edge>> {
        (self.components == 1 && self.tree.len() + 1 == state.n()).then(|| self.tree.clone())
    }
}
