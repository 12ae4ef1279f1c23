//! Pósa rotations and path extension on a [`Graph`].

use std::collections::VecDeque;

use crate::board::Edge;
use crate::graph::Graph;
use crate::oracle;

/// Every edge of `path` is an edge of `g` and no vertex repeats.
pub fn is_simple_path(g: &Graph, path: &[usize]) -> bool {
    let mut seen = vec![false; g.n()];
    for &v in path {
        if v >= g.n() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    path.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// Rotating the far end of `path` at the pivot `path[k]`, `k < len-2`:
/// `p0..pk` followed by the reversed tail. The new far end is `p_{k+1}`.
pub fn rotate(path: &[usize], k: usize) -> Vec<usize> {
    let mut out = path[..=k].to_vec();
    out.extend(path[k + 1..].iter().rev());
    out
}

/// All far endpoints reachable by rotations with `path[0]` fixed, each
/// with one representative path (BFS order, the input first).
pub fn rotation_closure(g: &Graph, path: &[usize]) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut found = vec![false; n];
    let mut out = vec![path.to_vec()];
    found[*path.last().unwrap()] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut pos = vec![usize::MAX; n];
    while let Some(idx) = queue.pop_front() {
        let p = out[idx].clone();
        let len = p.len();
        if len < 3 {
            continue;
        }
        for (i, &v) in p.iter().enumerate() {
            pos[v] = i;
        }
        let end = p[len - 1];
        for &x in g.neighbors(end) {
            let k = pos[x];
            if k == usize::MAX || k + 2 >= len {
                continue;
            }
            let new_end = p[k + 1];
            if !found[new_end] {
                found[new_end] = true;
                out.push(rotate(&p, k));
                queue.push_back(out.len() - 1);
            }
        }
        for &v in &p {
            pos[v] = usize::MAX;
        }
    }
    out
}

fn extend_greedily(g: &Graph, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
    let mut grew = false;
    loop {
        let end = *path.last().unwrap();
        match g.neighbors(end).iter().copied().filter(|&w| !on_path[w]).min() {
            Some(w) => {
                on_path[w] = true;
                path.push(w);
                grew = true;
            }
            None => return grew,
        }
    }
}

/// A long path found by extension, Pósa rotations and cycle opening,
/// starting from `seed` (or a single vertex). Exact for small graphs.
pub fn long_path(g: &Graph, seed: Option<&[usize]>) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    if n <= oracle::PATH_ORACLE_LIMIT {
        return oracle::longest_path(g);
    }
    let mut path: Vec<usize> = match seed {
        Some(p) if !p.is_empty() && is_simple_path(g, p) => p.to_vec(),
        _ => vec![(0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap()],
    };
    let mut on_path = vec![false; n];
    for &v in &path {
        on_path[v] = true;
    }
    loop {
        extend_greedily(g, &mut path, &mut on_path);
        path.reverse();
        extend_greedily(g, &mut path, &mut on_path);
        if path.len() == n {
            return path;
        }
        // Rotate the far end, then the other end, looking for an endpoint
        // with a neighbour off the path.
        let mut improved = false;
        for _ in 0..2 {
            for cand in rotation_closure(g, &path) {
                let end = *cand.last().unwrap();
                if g.neighbors(end).iter().any(|&w| !on_path[w]) {
                    path = cand;
                    improved = true;
                    break;
                }
            }
            if improved {
                break;
            }
            path.reverse();
        }
        if improved {
            continue;
        }
        // Close a cycle through the path and open it next to an outside
        // neighbour.
        if let Some(p) = open_cycle(g, &path, &on_path) {
            path = p;
            for &v in &path {
                on_path[v] = true;
            }
            continue;
        }
        return path;
    }
}

/// If some rotation of `path` closes into a cycle and a cycle vertex has a
/// neighbour off the path, the longer path through that neighbour.
fn open_cycle(g: &Graph, path: &[usize], on_path: &[bool]) -> Option<Vec<usize>> {
    let start = path[0];
    for cand in rotation_closure(g, path) {
        let end = *cand.last().unwrap();
        if cand.len() < 3 || !g.has_edge(start, end) {
            continue;
        }
        for (i, &v) in cand.iter().enumerate() {
            if let Some(&w) = g.neighbors(v).iter().find(|&&w| !on_path[w]) {
                // Cycle cand[0..] closed by {end, start}; walk it starting
                // just after v so that v is the last vertex.
                let len = cand.len();
                let mut out: Vec<usize> = (1..=len).map(|j| cand[(i + j) % len]).collect();
                out.push(w);
                return Some(out);
            }
        }
    }
    None
}

/// A Hamilton cycle (as a vertex order) if the long-path search finds one.
pub fn find_hamilton_cycle(g: &Graph, seed: Option<&[usize]>) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 3 {
        return None;
    }
    if n <= oracle::HC_ORACLE_LIMIT.min(oracle::PATH_ORACLE_LIMIT) {
        if !oracle::has_hamilton_cycle(g) {
            return None;
        }
        let nb = g.neighbors(0).to_vec();
        return nb.iter().find_map(|&w| oracle::hamilton_path(g, 0, w));
    }
    let path = long_path(g, seed);
    if path.len() < n {
        return None;
    }
    closing_rotation(g, &path)
}

fn closing_rotation(g: &Graph, path: &[usize]) -> Option<Vec<usize>> {
    for side in 0..2 {
        let p: Vec<usize> = if side == 0 {
            path.to_vec()
        } else {
            path.iter().rev().copied().collect()
        };
        let start = p[0];
        for cand in rotation_closure(g, &p) {
            if g.has_edge(start, *cand.last().unwrap()) {
                return Some(cand);
            }
        }
    }
    None
}

/// Cycle edges of a vertex order.
pub fn cycle_edges(order: &[usize]) -> Vec<Edge> {
    let n = order.len();
    (0..n).map(|i| Edge::new(order[i], order[(i + 1) % n])).collect()
}

pub fn path_edges(order: &[usize]) -> Vec<Edge> {
    order.windows(2).map(|w| Edge::new(w[0], w[1])).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoosterError {
    Disconnected,
    AlreadyHamiltonian,
    NoBooster,
}

/// A free non-edge that closes a Hamilton cycle or lengthens the longest
/// path: endpoint pairs of rotations of a longest path. Graphs with at
/// most 20 vertices use an exact longest path; if rotations yield nothing
/// free there, every free pair is tested.
pub fn find_booster(
    g: &Graph,
    is_free: impl Fn(usize, usize) -> bool,
    seed: Option<&[usize]>,
) -> Result<Edge, BoosterError> {
    let n = g.n();
    if !g.is_connected() {
        return Err(BoosterError::Disconnected);
    }
    let path = long_path(g, seed);
    if path.len() == n && closing_rotation(g, &path).is_some() {
        return Err(BoosterError::AlreadyHamiltonian);
    }
    if n <= oracle::HC_ORACLE_LIMIT.min(oracle::PATH_ORACLE_LIMIT) && oracle::has_hamilton_cycle(g) {
        return Err(BoosterError::AlreadyHamiltonian);
    }
    for rotated in rotation_closure(g, &path) {
        let a = *rotated.last().unwrap();
        let back: Vec<usize> = rotated.iter().rev().copied().collect();
        for other in rotation_closure(g, &back) {
            let z = *other.last().unwrap();
            if z != a && !g.has_edge(a, z) && is_free(a, z) {
                return Ok(Edge::new(a, z));
            }
        }
    }
    if n <= oracle::PATH_ORACLE_LIMIT {
        for u in 0..n {
            for v in u + 1..n {
                if !g.has_edge(u, v) && is_free(u, v) && oracle::is_booster(g, Edge::new(u, v)) {
                    return Ok(Edge::new(u, v));
                }
            }
        }
    }
    Err(BoosterError::NoBooster)
}

/// Endpoint-pair boosters from the rotation structure of one longest path
/// (no freeness filter).
pub fn rotation_boosters(g: &Graph) -> Vec<Edge> {
    let path = long_path(g, None);
    let mut out = Vec::new();
    for rotated in rotation_closure(g, &path) {
        let a = *rotated.last().unwrap();
        let back: Vec<usize> = rotated.iter().rev().copied().collect();
        for other in rotation_closure(g, &back) {
            let z = *other.last().unwrap();
            if z != a && !g.has_edge(a, z) {
                out.push(Edge::new(a, z));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Exhaustive over `|X| <= 3`, then `samples` random sets of sizes
/// `4..=k0`. Returns false on any witnessed `|N(X) \ X| < 2|X|`.
pub fn expander_spotcheck(g: &Graph, k0: usize, samples: usize, rng: &mut impl rand::Rng) -> bool {
    let n = g.n();
    let expands = |x: &[usize]| {
        let mut mark = vec![false; n];
        for &v in x {
            mark[v] = true;
        }
        let mut count = 0;
        let mut seen = vec![false; n];
        for &v in x {
            for &w in g.neighbors(v) {
                if !mark[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                }
            }
        }
        count >= 2 * x.len()
    };
    let small = k0.min(3).min(n);
    for a in 0..n {
        if small >= 1 && !expands(&[a]) {
            return false;
        }
        for b in a + 1..n {
            if small >= 2 && !expands(&[a, b]) {
                return false;
            }
            if small >= 3 {
                for c in b + 1..n {
                    if !expands(&[a, b, c]) {
                        return false;
                    }
                }
            }
        }
    }
    if k0 >= 4 && n >= 4 {
        let verts: Vec<usize> = (0..n).collect();
        for _ in 0..samples {
            let size = rng.gen_range(4..=k0.min(n));
            let x: Vec<usize> = rand::seq::index::sample(rng, n, size)
                .into_iter()
                .map(|i| verts[i])
                .collect();
            if !expands(&x) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path_graph(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| Edge::new(i, i + 1)))
    }

    #[test]
    fn rotations_stay_simple() {
        let mut g = path_graph(8);
        g.add_edge(7, 3);
        g.add_edge(7, 1);
        let p: Vec<usize> = (0..8).collect();
        let all = rotation_closure(&g, &p);
        assert!(all.len() >= 3);
        for q in &all {
            assert!(is_simple_path(&g, q));
            assert_eq!(q.len(), 8);
            assert_eq!(q[0], 0);
        }
    }

    #[test]
    fn booster_on_a_path_closes_the_cycle() {
        let g = path_graph(30);
        let e = find_booster(&g, |_, _| true, None).unwrap();
        assert_eq!(e, Edge::new(0, 29));
        let g = path_graph(6);
        assert_eq!(find_booster(&g, |_, _| true, None).unwrap(), Edge::new(0, 5));
    }

    #[test]
    fn hamiltonian_input_is_rejected() {
        let g = Graph::complete(5);
        assert_eq!(find_booster(&g, |_, _| true, None), Err(BoosterError::AlreadyHamiltonian));
        let mut c = path_graph(40);
        c.add_edge(0, 39);
        assert_eq!(find_booster(&c, |_, _| true, None), Err(BoosterError::AlreadyHamiltonian));
        assert_eq!(find_hamilton_cycle(&c, None).map(|o| o.len()), Some(40));
    }

    #[test]
    fn long_path_is_simple_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = 40;
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rand::Rng::gen_bool(&mut rng, 0.1) {
                        g.add_edge(u, v);
                    }
                }
            }
            let p = long_path(&g, None);
            assert!(is_simple_path(&g, &p));
        }
    }

    #[test]
    fn spotcheck_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(expander_spotcheck(&Graph::complete(7), 2, 10, &mut rng));
        let star = Graph::from_edges(10, (1..10).map(|i| Edge::new(0, i)));
        assert!(!expander_spotcheck(&star, 3, 10, &mut rng));
        let mut two = Graph::new(10);
        for base in [0, 5] {
            for u in 0..5 {
                for v in u + 1..5 {
                    two.add_edge(base + u, base + v);
                }
            }
        }
        assert!(!expander_spotcheck(&two, 4, 0, &mut rng));
    }
}
