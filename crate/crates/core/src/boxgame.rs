//! The Box game `B(k, t, a, 1)`: `k` disjoint boxes of near-equal size
//! holding `t` elements in total. BoxMaker claims `a` elements per move,
//! BoxBreaker one element per move (which kills the box). BoxBreaker moves
//! first. BoxMaker wins by filling a box.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoxError {
    #[error("the potential is defined for k >= 1 and a >= 1 (got k = {k}, a = {a})")]
    BadArguments { k: u64, a: u64 },
    #[error("no surviving box to destroy")]
    NoSurvivingBox,
    #[error("potential overflowed at k = {0}")]
    Overflow(u64),
}

/// The Chvátal-Erdős potential: `f(1,a) = 0`,
/// `f(k,a) = floor(k (f(k-1,a) + a) / (k-1))`, evaluated iteratively in
/// 128-bit arithmetic.
pub fn potential(k: u64, a: u64) -> Result<u128, BoxError> {
    if k == 0 || a == 0 {
        return Err(BoxError::BadArguments { k, a });
    }
    let mut f: u128 = 0;
    for j in 2..=k as u128 {
        let num = j
            .checked_mul(f + a as u128)
            .ok_or(BoxError::Overflow(j as u64))?;
        f = num / (j - 1);
    }
    Ok(f)
}

/// All of `f(1,a), ..., f(k_max,a)` in one pass.
pub fn potential_table(k_max: u64, a: u64) -> Result<Vec<u128>, BoxError> {
    if k_max == 0 || a == 0 {
        return Err(BoxError::BadArguments { k: k_max, a });
    }
    let mut out = Vec::with_capacity(k_max as usize);
    let mut f: u128 = 0;
    out.push(0);
    for j in 2..=k_max as u128 {
        f = j * (f + a as u128) / (j - 1);
        out.push(f);
    }
    Ok(out)
}

/// BoxMaker wins `B(k,t,a,1)` iff `t <= f(k,a)`.
pub fn boxmaker_wins(k: u64, t: u64, a: u64) -> bool {
    potential(k, a).is_ok_and(|f| t as u128 <= f)
}

pub fn harmonic(k: u64) -> f64 {
    (1..=k).map(|j| 1.0 / j as f64).sum()
}

/// The approximation `(a-1) k H_k <= f(k,a) <= a k H_k`.
pub fn potential_bounds(k: u64, a: u64) -> (f64, f64) {
    let kh = k as f64 * harmonic(k);
    ((a as f64 - 1.0) * kh, a as f64 * kh)
}

/// `per_move * H_num_boxes`: the most a BoxMaker with bias `per_move` can
/// pile into one box against a BoxBreaker that always kills the fullest box.
pub fn max_box_load(num_boxes: u64, per_move: u64) -> f64 {
    assert!(num_boxes >= 1);
    // Summed smallest-first for accuracy.
    (1..=num_boxes)
        .rev()
        .map(|j| per_move as f64 / j as f64)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSlot {
    pub size: u64,
    pub eaten: u64,
    pub destroyed: bool,
}

impl BoxSlot {
    pub fn remaining(&self) -> u64 {
        self.size - self.eaten
    }

    fn alive(&self) -> bool {
        !self.destroyed && self.eaten < self.size
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxState {
    pub boxes: Vec<BoxSlot>,
    pub a: u64,
}

impl BoxState {
    /// `k` boxes holding `t` elements, sizes differing by at most one.
    pub fn new(k: usize, t: u64, a: u64) -> Self {
        let base = t / k as u64;
        let extra = (t % k as u64) as usize;
        let sizes = (0..k).map(|i| base + u64::from(i < extra));
        BoxState::with_sizes(sizes, a)
    }

    pub fn with_sizes(sizes: impl IntoIterator<Item = u64>, a: u64) -> Self {
        BoxState {
            boxes: sizes
                .into_iter()
                .map(|size| BoxSlot {
                    size,
                    eaten: 0,
                    destroyed: false,
                })
                .collect(),
            a,
        }
    }

    /// Some undestroyed box is completely claimed by BoxMaker.
    pub fn maker_has_won(&self) -> bool {
        self.boxes.iter().any(|b| !b.destroyed && b.eaten == b.size)
    }

    pub fn surviving(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.boxes.len()).filter(|&i| self.boxes[i].alive())
    }

    /// Kills the surviving box with the most BoxMaker elements (lowest
    /// index on ties).
    pub fn boxbreaker_move(&mut self) -> Result<usize, BoxError> {
        let mut best: Option<usize> = None;
        for i in self.surviving() {
            if best.is_none_or(|j| self.boxes[i].eaten > self.boxes[j].eaten) {
                best = Some(i);
            }
        }
        let i = best.ok_or(BoxError::NoSurvivingBox)?;
        self.boxes[i].destroyed = true;
        Ok(i)
    }

    /// Balanced BoxMaker: if a surviving box can be finished this move,
    /// finish the one closest to completion; spend everything else one
    /// element at a time on the surviving box with the most room left.
    /// Returns the box index of every claimed element.
    pub fn boxmaker_move(&mut self) -> Vec<usize> {
        let mut budget = self.a;
        let mut claims = Vec::new();
        let finishable = self
            .surviving()
            .filter(|&i| self.boxes[i].remaining() <= budget)
            .min_by_key(|&i| (self.boxes[i].remaining(), i));
        if let Some(i) = finishable {
            let r = self.boxes[i].remaining();
            self.boxes[i].eaten = self.boxes[i].size;
            claims.extend(std::iter::repeat_n(i, r as usize));
            budget -= r;
        }
        while budget > 0 {
            let target = self
                .surviving()
                .max_by_key(|&i| (self.boxes[i].remaining(), std::cmp::Reverse(i)));
            let Some(i) = target else { break };
            self.boxes[i].eaten += 1;
            claims.push(i);
            budget -= 1;
        }
        claims
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxRun {
    pub maker_won: bool,
    pub rounds: usize,
    /// Largest number of BoxMaker elements in any box at the moment it was
    /// destroyed (or at the end).
    pub max_load: u64,
}

/// Plays balanced BoxMaker against the fullest-box BoxBreaker, BoxBreaker
/// first, until a box is filled or every box is dead.
pub fn simulate(mut state: BoxState) -> BoxRun {
    let mut rounds = 0;
    let mut max_load = 0;
    loop {
        if state.maker_has_won() {
            break;
        }
        match state.boxbreaker_move() {
            Ok(i) => max_load = max_load.max(state.boxes[i].eaten),
            Err(_) => break,
        }
        if state.surviving().next().is_none() {
            break;
        }
        state.boxmaker_move();
        rounds += 1;
    }
    for b in &state.boxes {
        max_load = max_load.max(b.eaten);
    }
    BoxRun {
        maker_won: state.maker_has_won(),
        rounds,
        max_load,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Full game-tree search. `boxes` holds remaining sizes of surviving
    /// boxes; BoxBreaker moves when `breaker_to_move`.
    fn minimax(boxes: Vec<u64>, a: u64, breaker_to_move: bool, memo: &mut HashMap<(Vec<u64>, bool), bool>) -> bool {
        if boxes.contains(&0) {
            return true;
        }
        if boxes.is_empty() {
            return false;
        }
        let key = (boxes.clone(), breaker_to_move);
        if let Some(&r) = memo.get(&key) {
            return r;
        }
        let result = if breaker_to_move {
            (0..boxes.len()).all(|i| {
                let mut rest = boxes.clone();
                rest.remove(i);
                rest.sort_unstable();
                minimax(rest, a, false, memo)
            })
        } else {
            let total: u64 = boxes.iter().sum();
            let claims = a.min(total);
            let mut found = false;
            distribute(&boxes, 0, claims, &mut Vec::new(), &mut |alloc| {
                let mut next: Vec<u64> = boxes.iter().zip(alloc).map(|(s, c)| s - c).collect();
                next.sort_unstable();
                if minimax(next, a, true, memo) {
                    found = true;
                }
            });
            found
        };
        memo.insert(key, result);
        result
    }

    fn distribute(boxes: &[u64], i: usize, left: u64, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if i == boxes.len() {
            if left == 0 {
                f(cur);
            }
            return;
        }
        for c in 0..=left.min(boxes[i]) {
            cur.push(c);
            distribute(boxes, i + 1, left - c, cur, f);
            cur.pop();
        }
    }

    #[test]
    fn potential_small_values() {
        assert_eq!(potential(1, 7).unwrap(), 0);
        assert_eq!(potential(2, 2).unwrap(), 4);
        assert_eq!(potential(3, 2).unwrap(), 9);
        assert!(potential(0, 2).is_err());
        assert_eq!(potential_table(3, 2).unwrap(), vec![0, 4, 9]);
    }

    #[test]
    fn winner_criterion() {
        assert!(boxmaker_wins(2, 4, 2));
        assert!(!boxmaker_wins(2, 5, 2));
        assert!(!boxmaker_wins(1, 1, 1));
    }

    #[test]
    fn criterion_matches_game_tree_search() {
        for a in 1..=3u64 {
            let mut memo = HashMap::new();
            for k in 1..=4u64 {
                for t in 1..=12u64 {
                    let st = BoxState::new(k as usize, t, a);
                    let mut sizes: Vec<u64> = st.boxes.iter().map(|b| b.size).collect();
                    sizes.sort_unstable();
                    let truth = minimax(sizes, a, true, &mut memo);
                    assert_eq!(boxmaker_wins(k, t, a), truth, "k={k} t={t} a={a}");
                }
            }
        }
    }

    #[test]
    fn harmonic_loads() {
        assert!((max_box_load(1, 5) - 5.0).abs() < 1e-12);
        assert!((max_box_load(3, 1) - 11.0 / 6.0).abs() < 1e-12);
        let n = 100u64;
        let b = 2u64;
        let load = max_box_load(2 * n, 8 * b);
        assert!((load - 94.05).abs() < 0.01, "{load}");
        assert!(load <= 8.0 * b as f64 * (2.0 * n as f64).ln() + 8.0 * b as f64);
    }

    #[test]
    fn breaker_kills_fullest_box() {
        let mut st = BoxState::with_sizes([10, 10, 10], 1);
        st.boxes[0].eaten = 3;
        st.boxes[1].eaten = 1;
        st.boxes[2].eaten = 2;
        assert_eq!(st.boxbreaker_move().unwrap(), 0);
        let mut st = BoxState::with_sizes([10, 10], 1);
        st.boxes[0].eaten = 2;
        st.boxes[1].eaten = 2;
        assert_eq!(st.boxbreaker_move().unwrap(), 0);
        assert_eq!(st.boxbreaker_move().unwrap(), 1);
        assert_eq!(st.boxbreaker_move(), Err(BoxError::NoSurvivingBox));
    }

    #[test]
    fn balanced_maker_allocation() {
        let mut st = BoxState::with_sizes([5, 5, 5], 3);
        assert_eq!(st.boxmaker_move(), vec![0, 1, 2]);
        let mut st = BoxState::with_sizes([1, 5], 2);
        assert_eq!(st.boxmaker_move(), vec![0, 1]);
        assert!(st.maker_has_won());
        let mut st = BoxState::with_sizes([4], 6);
        assert_eq!(st.boxmaker_move(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn potential_is_monotone() {
        for a in 1..=20u64 {
            let row = potential_table(300, a).unwrap();
            let next = potential_table(300, a + 1).unwrap();
            for k in 0..300 {
                assert!(row[k] <= next[k]);
                if k + 1 < 300 {
                    assert!(row[k] <= row[k + 1]);
                }
            }
        }
    }

    #[test]
    fn upper_bound_everywhere_lower_bound_once_k_reaches_a() {
        for a in 1..=100u64 {
            let table = potential_table(10_000, a).unwrap();
            let mut h = 0.0;
            for (i, &f) in table.iter().enumerate() {
                let k = i as u64 + 1;
                h += 1.0 / k as f64;
                let kh = k as f64 * h;
                assert!(f as f64 <= a as f64 * kh + 1e-9, "upper k={k} a={a}");
                if k >= a {
                    assert!(f as f64 + 1e-9 >= (a as f64 - 1.0) * kh, "lower k={k} a={a}");
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn no_box_filled_when_boxes_exceed_the_harmonic_load(k in 1usize..60, a in 1u64..12) {
            let size = max_box_load(k as u64, a).floor() as u64 + 1;
            let run = simulate(BoxState::with_sizes(vec![size; k], a));
            proptest::prop_assert!(!run.maker_won, "k={} a={} size={} run={:?}", k, a, size, run);
            proptest::prop_assert!(run.max_load as f64 <= max_box_load(k as u64, a) + 1e-9);
        }
    }
}
