//! A nonadjacent pair whose degree sum reaches the average degree.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("the graph is complete")]
    NoNonadjacentPair,
}

/// Nonadjacent `(x, y)` in `g[set]` with `d(x) + d(y) >= D`, where degrees
/// and the average `D` are taken inside the set. Vertices are scanned by
/// degree descending (ties by index).
pub fn lemma10_pair(g: &Graph, set: &[usize]) -> Result<(usize, usize), PairError> {
    let mut member = vec![false; g.n()];
    for &v in set {
        member[v] = true;
    }
    let deg: Vec<usize> = (0..g.n())
        .map(|v| if member[v] { g.neighbors(v).iter().filter(|&&u| member[u]).count() } else { 0 })
        .collect();
    let mut order = set.to_vec();
    order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    let total: usize = set.iter().map(|&v| deg[v]).sum();
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, &x) in order.iter().enumerate() {
        for &y in &order[i + 1..] {
            if !g.has_edge(x, y) {
                let s = deg[x] + deg[y];
                // `s * |S| >= total` is `s >= D` without rounding.
                if s * set.len() >= total {
                    return Ok((x.min(y), x.max(y)));
                }
                if best.is_none_or(|b| s > b.2) {
                    best = Some((x, y, s));
                }
            }
        }
    }
    match best {
        Some((x, y, _)) => Ok((x.min(y), x.max(y))),
        None => Err(PairError::NoNonadjacentPair),
    }
}
