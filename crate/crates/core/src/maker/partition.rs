//! Equitable partitions of a vertex set into classes independent in a
//! conflict graph: greedy colouring, then balancing moves.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("{classes} classes cannot hold a proper colouring (maximum degree {max_degree})")]
    TooFewClasses { classes: usize, max_degree: usize },
    #[error("partition failed: smallest class {smallest} below target {target}")]
    PartitionFailed { smallest: usize, target: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub classes: Vec<Vec<usize>>,
    /// False when balancing stalled; every class then still has at least
    /// `⌊|V|/k⌋ - 1` vertices.
    pub equitable: bool,
}

/// Splits `vertices` into `k` classes, each independent in `conflict`,
/// with sizes `⌊|V|/k⌋` or `⌈|V|/k⌉` when balancing succeeds.
pub fn equitable_partition(vertices: &[usize], conflict: &Graph, k: usize) -> Result<Partition, PartitionError> {
    let mut in_set = vec![false; conflict.n()];
    for &v in vertices {
        in_set[v] = true;
    }
    let member = &in_set;
    let inner = |v: usize| conflict.neighbors(v).iter().copied().filter(move |&u| member[u]);
    let max_degree = vertices.iter().map(|&v| inner(v).count()).max().unwrap_or(0);
    if k == 0 || k < max_degree + 1 {
        return Err(PartitionError::TooFewClasses { classes: k, max_degree });
    }
    let mut colour = vec![usize::MAX; conflict.n()];
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    for &v in &sorted {
        // Smallest class among colours not used by neighbours.
        let mut used = vec![false; k];
        for u in inner(v) {
            if colour[u] != usize::MAX {
                used[colour[u]] = true;
            }
        }
        let c = (0..k).filter(|&c| !used[c]).min_by_key(|&c| (classes[c].len(), c)).expect("k > max degree");
        colour[v] = c;
        classes[c].push(v);
    }
    let lo = vertices.len() / k;
    let hi = vertices.len().div_ceil(k);
    let fits = |v: usize, c: usize, colour: &[usize]| inner(v).all(|u| colour[u] != c);
    let mut rounds = 0;
    loop {
        let big = (0..k).max_by_key(|&c| (classes[c].len(), std::cmp::Reverse(c))).unwrap();
        let small = (0..k).min_by_key(|&c| (classes[c].len(), c)).unwrap();
        if classes[big].len() <= hi && classes[small].len() >= lo {
            break;
        }
        rounds += 1;
        if rounds > 4 * vertices.len() + 16 {
            break;
        }
        // Direct move from the largest class into the smallest.
        if let Some(i) = classes[big].iter().position(|&v| fits(v, small, &colour)) {
            let v = classes[big].swap_remove(i);
            colour[v] = small;
            classes[small].push(v);
            continue;
        }
        // Otherwise through an intermediate class.
        let mut moved = false;
        'search: for mid in (0..k).filter(|&c| c != big && c != small) {
            for i in 0..classes[mid].len() {
                let w = classes[mid][i];
                if !fits(w, small, &colour) {
                    continue;
                }
                colour[w] = small;
                if let Some(j) = classes[big].iter().position(|&v| fits(v, mid, &colour)) {
                    classes[mid].swap_remove(i);
                    classes[small].push(w);
                    let v = classes[big].swap_remove(j);
                    colour[v] = mid;
                    classes[mid].push(v);
                    moved = true;
                    break 'search;
                }
                colour[w] = mid;
            }
        }
        if !moved {
            break;
        }
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    let smallest = classes.iter().map(Vec::len).min().unwrap_or(0);
    let largest = classes.iter().map(Vec::len).max().unwrap_or(0);
    let equitable = smallest >= lo && largest <= hi;
    if !equitable && smallest + 1 < lo {
        return Err(PartitionError::PartitionFailed { smallest, target: lo });
    }
    Ok(Partition { classes, equitable })
}
