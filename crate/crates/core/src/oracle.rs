//! Exact, exponential-time ground truth for small instances. None of this
//! shares code with the strategies it is used to check.

use thiserror::Error;

use crate::board::Edge;
use crate::engine::GoalKind;
use crate::graph::Graph;

pub const HC_ORACLE_LIMIT: usize = 24;
pub const PM_ORACLE_LIMIT: usize = 20;
pub const CONN_ORACLE_LIMIT: usize = 2000;
pub const PATH_ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance with n = {n} exceeds the oracle limit {limit}")]
    InstanceTooLarge { n: usize, limit: usize },
}

fn guard(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::InstanceTooLarge { n, limit })
    } else {
        Ok(())
    }
}

/// Does `graph` contain the goal structure?
pub fn exact_goal_check(graph: &Graph, goal: GoalKind) -> Result<bool, OracleError> {
    match goal {
        GoalKind::HamiltonCycle => {
            guard(graph.n(), HC_ORACLE_LIMIT)?;
            Ok(has_hamilton_cycle(graph))
        }
        GoalKind::PerfectMatching => {
            guard(graph.n(), PM_ORACLE_LIMIT)?;
            Ok(has_perfect_matching(graph))
        }
        GoalKind::Connectivity => {
            guard(graph.n(), CONN_ORACLE_LIMIT)?;
            Ok(graph.is_connected())
        }
        GoalKind::MinDegree(c) => Ok(graph.min_degree() >= c),
    }
}

/// Subset DP over paths that start at vertex 0. `reach[S]` holds the set of
/// possible last vertices of a path from 0 through exactly `S ∪ {0}`.
fn paths_from(graph: &Graph, start: usize) -> Vec<u32> {
    let n = graph.n();
    let full = 1usize << n;
    let mut reach = vec![0u32; full];
    reach[1 << start] = 1 << start;
    for mask in 0..full {
        let ends = reach[mask];
        if ends == 0 {
            continue;
        }
        let mut e = ends;
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut nb = graph.row_mask(v) as u32 & !(mask as u32);
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                reach[mask | 1 << w] |= 1 << w;
            }
        }
    }
    reach
}

pub fn has_hamilton_cycle(graph: &Graph) -> bool {
    let n = graph.n();
    assert!(n <= HC_ORACLE_LIMIT);
    if n < 3 {
        return false;
    }
    // Paths from 0 over vertices 1..n, indexed without vertex 0's bit.
    let m = n - 1;
    let full = 1usize << m;
    let mut reach = vec![0u32; full];
    let zero_nb = (graph.row_mask(0) >> 1) as u32;
    let mut nb = zero_nb;
    while nb != 0 {
        let v = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        reach[1 << v] |= 1 << v;
    }
    for mask in 1..full {
        let mut e = reach[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut nb = (graph.row_mask(v + 1) >> 1) as u32 & !(mask as u32);
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                reach[mask | 1 << w] |= 1 << w;
            }
        }
    }
    reach[full - 1] & zero_nb != 0
}

/// Exhaustive perfect-matching test: the lowest unmatched vertex must be
/// matched to some neighbour.
pub fn has_perfect_matching(graph: &Graph) -> bool {
    let n = graph.n();
    assert!(n <= PM_ORACLE_LIMIT);
    if n % 2 == 1 {
        return false;
    }
    let full = (1u32 << n) - 1;
    // 0 unknown, 1 false, 2 true
    let mut memo = vec![0u8; 1 << n];
    fn solve(g: &Graph, unmatched: u32, memo: &mut [u8]) -> bool {
        if unmatched == 0 {
            return true;
        }
        match memo[unmatched as usize] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        let v = unmatched.trailing_zeros() as usize;
        let mut cand = g.row_mask(v) as u32 & unmatched;
        let mut ok = false;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if solve(g, unmatched & !(1 << v) & !(1 << w), memo) {
                ok = true;
                break;
            }
        }
        memo[unmatched as usize] = if ok { 2 } else { 1 };
        ok
    }
    solve(graph, full, &mut memo)
}

/// Is there a Hamilton path from `p` to `q`?
pub fn has_hamilton_path(graph: &Graph, p: usize, q: usize) -> bool {
    assert!(graph.n() <= HC_ORACLE_LIMIT);
    if p == q {
        return graph.n() == 1;
    }
    let reach = paths_from(graph, p);
    reach[(1usize << graph.n()) - 1] >> q & 1 == 1
}

/// A Hamilton path from `p` to `q`, reconstructed from the subset DP.
pub fn hamilton_path(graph: &Graph, p: usize, q: usize) -> Option<Vec<usize>> {
    let n = graph.n();
    assert!(n <= HC_ORACLE_LIMIT);
    if p == q {
        return (n == 1).then(|| vec![p]);
    }
    let reach = paths_from(graph, p);
    let mut mask = (1usize << n) - 1;
    if reach[mask] >> q & 1 == 0 {
        return None;
    }
    let mut path = vec![q];
    let mut cur = q;
    while mask != 1 << p {
        let prev_mask = mask & !(1 << cur);
        let cands = reach[prev_mask] & graph.row_mask(cur) as u32;
        let prev = cands.trailing_zeros() as usize;
        debug_assert!(cands != 0);
        path.push(prev);
        mask = prev_mask;
        cur = prev;
    }
    path.reverse();
    Some(path)
}

/// Every pair of distinct vertices is joined by a Hamilton path.
pub fn is_hamilton_connected(graph: &Graph) -> bool {
    let n = graph.n();
    assert!(n <= HC_ORACLE_LIMIT);
    if n <= 1 {
        return true;
    }
    if n == 2 {
        return graph.has_edge(0, 1);
    }
    if graph.min_degree() < 3 && n >= 4 {
        return false;
    }
    let full = (1usize << n) - 1;
    for p in 0..n - 1 {
        let reach = paths_from(graph, p);
        let want = (full as u32) & !((1u32 << (p + 1)) - 1);
        if reach[full] & want != want {
            return false;
        }
    }
    true
}

/// Number of vertices on a longest path (0 for the empty graph).
pub fn longest_path_vertices(graph: &Graph) -> usize {
    let n = graph.n();
    assert!(n <= PATH_ORACLE_LIMIT);
    if n == 0 {
        return 0;
    }
    let full = 1usize << n;
    let mut reach = vec![0u32; full];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    let mut best = 1;
    for mask in 1..full {
        let mut e = reach[mask];
        if e == 0 {
            continue;
        }
        best = best.max(mask.count_ones() as usize);
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut nb = graph.row_mask(v) as u32 & !(mask as u32);
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                reach[mask | 1 << w] |= 1 << w;
            }
        }
    }
    best
}

/// A longest path, reconstructed from the subset DP.
pub fn longest_path(graph: &Graph) -> Vec<usize> {
    let n = graph.n();
    assert!(n <= PATH_ORACLE_LIMIT);
    if n == 0 {
        return Vec::new();
    }
    let full = 1usize << n;
    let mut reach = vec![0u32; full];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    let mut best = (1usize, 1usize, 0usize);
    for mask in 1..full {
        let mut e = reach[mask];
        if e == 0 {
            continue;
        }
        let size = mask.count_ones() as usize;
        if size > best.0 {
            best = (size, mask, e.trailing_zeros() as usize);
        }
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut nb = graph.row_mask(v) as u32 & !(mask as u32);
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                reach[mask | 1 << w] |= 1 << w;
            }
        }
    }
    let (_, mut mask, mut cur) = best;
    let mut path = vec![cur];
    while mask.count_ones() > 1 {
        let prev_mask = mask & !(1 << cur);
        let cands = reach[prev_mask] & graph.row_mask(cur) as u32;
        debug_assert!(cands != 0);
        cur = cands.trailing_zeros() as usize;
        path.push(cur);
        mask = prev_mask;
    }
    path
}

/// Booster test by definition: adding `e` makes the graph Hamiltonian or
/// lengthens its longest path.
pub fn is_booster(graph: &Graph, e: Edge) -> bool {
    let (u, v) = e.endpoints();
    if graph.has_edge(u, v) {
        return false;
    }
    let before = longest_path_vertices(graph);
    let mut g = graph.clone();
    g.add_edge(u, v);
    has_hamilton_cycle(&g) || longest_path_vertices(&g) > before
}

/// All boosters of `graph` among the non-edges accepted by `allowed`.
pub fn enumerate_boosters(graph: &Graph, allowed: impl Fn(Edge) -> bool) -> Vec<Edge> {
    let n = graph.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let e = Edge::new(u, v);
            if !graph.has_edge(u, v) && allowed(e) && is_booster(graph, e) {
                out.push(e);
            }
        }
    }
    out
}

/// Exhaustive check of `|N(X) \ X| >= 2|X|` for all nonempty `|X| <= k`.
pub fn is_expander_exact(graph: &Graph, k: usize) -> bool {
    let n = graph.n();
    assert!(n <= 24);
    let k = k.min(n);
    let full = 1u64 << n;
    for x in 1..full {
        let size = x.count_ones() as usize;
        if size > k {
            continue;
        }
        let mut nb = 0u64;
        let mut bits = x;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            nb |= graph.row_mask(v);
        }
        nb &= !x;
        if (nb.count_ones() as usize) < 2 * size {
            return false;
        }
    }
    true
}
