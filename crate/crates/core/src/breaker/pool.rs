//! Baseline adversaries for empirical bound checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::board::{Edge, GameState};
use crate::engine::{BreakerAction, BreakerStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PoolKind {
    /// Uniformly random free edges.
    Random,
    /// Piles edges onto the Maker endpoint of largest Breaker degree.
    EndpointGreedy,
    /// Raises the Breaker degrees of untouched vertices evenly.
    BoxEmulating,
    /// Claims free edges between Maker endpoints.
    PairDestroyer,
}

impl PoolKind {
    pub const ALL: [PoolKind; 4] =
        [PoolKind::Random, PoolKind::EndpointGreedy, PoolKind::BoxEmulating, PoolKind::PairDestroyer];

    pub fn name(self) -> &'static str {
        match self {
            PoolKind::Random => "random",
            PoolKind::EndpointGreedy => "endpoint_greedy",
            PoolKind::BoxEmulating => "box_emulating",
            PoolKind::PairDestroyer => "pair_destroyer",
        }
    }
}

/// Maker path endpoints, approximated as vertices of Maker degree at most 1.
fn endpoints(state: &GameState) -> Vec<usize> {
    (0..state.n()).filter(|&v| state.deg_m(v) <= 1).collect()
}

/// Up to `want` distinct random free edges with both ends in `set`
/// (`None`: anywhere), by rejection sampling with an exhaustive fallback.
fn random_free(
    state: &GameState,
    set: Option<&[usize]>,
    want: usize,
    out: &mut Vec<Edge>,
    rng: &mut ChaCha8Rng,
) {
    let all: Vec<usize>;
    let pool = match set {
        Some(s) => s,
        None => {
            all = (0..state.n()).collect();
            &all
        }
    };
    if pool.len() < 2 {
        return;
    }
    let mut misses = 0;
    while out.len() < want && misses < 64 {
        let a = pool[rng.gen_range(0..pool.len())];
        let b = pool[rng.gen_range(0..pool.len())];
        if a != b && state.pair_free(a, b) && !out.contains(&Edge::new(a, b)) {
            out.push(Edge::new(a, b));
            misses = 0;
        } else {
            misses += 1;
        }
    }
    if out.len() < want {
        let mut rest: Vec<Edge> = Vec::new();
        for (i, &a) in pool.iter().enumerate() {
            for &b in &pool[i + 1..] {
                let e = Edge::new(a, b);
                if state.pair_free(a, b) && !out.contains(&e) {
                    rest.push(e);
                }
            }
        }
        rest.sort_unstable();
        rest.dedup();
        let k = (want - out.len()).min(rest.len());
        out.extend(rest.choose_multiple(rng, k).copied());
    }
}

#[derive(Clone, Debug)]
pub struct PoolBreaker {
    kind: PoolKind,
    rng: ChaCha8Rng,
}

impl PoolBreaker {
    pub fn new(kind: PoolKind, seed: u64) -> Self {
        PoolBreaker {
            kind,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn plan(&mut self, state: &GameState) -> Vec<Edge> {
        let want = state.free_count().min(state.bias());
        let mut out = Vec::with_capacity(want);
        match self.kind {
            PoolKind::Random => {}
            PoolKind::EndpointGreedy => self.endpoint_greedy(state, want, &mut out),
            PoolKind::BoxEmulating => self.box_emulating(state, want, &mut out),
            PoolKind::PairDestroyer => {
                let ends = endpoints(state);
                random_free(state, Some(&ends), want, &mut out, &mut self.rng);
            }
        }
        random_free(state, None, want, &mut out, &mut self.rng);
        out
    }

    fn endpoint_greedy(&mut self, state: &GameState, want: usize, out: &mut Vec<Edge>) {
        let ends = endpoints(state);
        let mut is_end = vec![false; state.n()];
        for &v in &ends {
            is_end[v] = true;
        }
        let mut extra = vec![0usize; state.n()];
        let taken = |out: &[Edge], e: Edge| out.contains(&e);
        while out.len() < want {
            let mut order = ends.clone();
            order.sort_by_key(|&v| (std::cmp::Reverse(state.deg_b(v) + extra[v]), v));
            let mut found = None;
            'outer: for &v in &order {
                // Other endpoints first, then anything.
                for pass in 0..2 {
                    for u in 0..state.n() {
                        if u != v && (pass == 1 || is_end[u]) && state.pair_free(u, v) && !taken(out, Edge::new(u, v)) {
                            found = Some(Edge::new(u, v));
                            break 'outer;
                        }
                    }
                }
            }
            match found {
                Some(e) => {
                    extra[e.u as usize] += 1;
                    extra[e.v as usize] += 1;
                    out.push(e);
                }
                None => break,
            }
        }
    }

    fn box_emulating(&mut self, state: &GameState, want: usize, out: &mut Vec<Edge>) {
        let mut untouched: Vec<usize> = (0..state.n()).filter(|&v| state.deg_m(v) == 0).collect();
        let mut extra = vec![0usize; state.n()];
        while out.len() < want {
            untouched.sort_by_key(|&v| (state.deg_b(v) + extra[v], v));
            let mut found = None;
            'outer: for (i, &a) in untouched.iter().enumerate() {
                for &b in &untouched[i + 1..] {
                    let e = Edge::new(a, b);
                    if state.pair_free(a, b) && !out.contains(&e) {
                        found = Some(e);
                        break 'outer;
                    }
                }
            }
            match found {
                Some(e) => {
                    extra[e.u as usize] += 1;
                    extra[e.v as usize] += 1;
                    out.push(e);
                }
                None => break,
            }
        }
    }
}

impl BreakerStrategy for PoolBreaker {
    fn name(&self) -> String {
        self.kind.name().into()
    }

    fn next_move(&mut self, state: &GameState) -> BreakerAction {
        BreakerAction::claim(self.plan(state))
    }
}
