//! Hamilton cycle Maker for small bias, in five stages over a collection
//! of vertex-disjoint paths: degree-driven pairing of endpoints (two
//! interleaved rules), max-sum pairing, lengthening short paths by
//! near-middle splits, Pósa phases joining pairs of paths, and closing the
//! Hamilton path by rotations from both ends.

use serde::{Deserialize, Serialize};

use crate::board::{Edge, GameState};
use crate::engine::{Forfeit, MakerAction, MakerStrategy, Notes};
use crate::maker::paths::PathSystem;
use crate::maker::posa;
use crate::maker::MakerError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathLenRule {
    /// `n^e`.
    Power(f64),
    /// A fraction of the mean path length `n/|P|` when stage 3 starts.
    MeanFraction(f64),
    Absolute(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HvsConfig {
    /// Stage 1 lasts `n - s1_coeff * b ln b` moves.
    pub s1_coeff: f64,
    pub delta: f64,
    pub min_path_len: PathLenRule,
    /// Near-middle vertices: the central `rho` fraction of the interior.
    pub rho: f64,
    /// A split neighbour needs `d_B(y) < y_deg_coeff * b ln n`.
    pub y_deg_coeff: f64,
    /// Saturation threshold `n^saturation_exp`.
    pub saturation_exp: f64,
    pub max_bias: Option<usize>,
    /// Check the path system after every move.
    pub validate: bool,
}

impl Default for HvsConfig {
    fn default() -> Self {
        HvsConfig {
            s1_coeff: 30.0,
            delta: 0.999,
            min_path_len: PathLenRule::Power(0.75),
            rho: 0.01,
            y_deg_coeff: 18.0,
            saturation_exp: 0.5,
            max_bias: None,
            validate: true,
        }
    }
}

impl HvsConfig {
    /// Thresholds scaled for `n` in the thousands: short paths are measured
    /// against the mean path length and the near-middle window is wider.
    pub fn desk() -> Self {
        HvsConfig {
            min_path_len: PathLenRule::MeanFraction(0.25),
            rho: 0.2,
            ..HvsConfig::default()
        }
    }

    pub fn stage1_moves(&self, n: usize, b: usize) -> usize {
        let b = b as f64;
        let l = n as f64 - self.s1_coeff * b * b.ln();
        (l.max(0.0).floor() as usize).min(n - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub join: Edge,
    pub forgotten: Edge,
    /// Endpoint of the short path.
    pub u: usize,
    pub x: usize,
    pub y: usize,
}

/// Picks a near-middle vertex `x` of `q` (lowest index among eligible
/// ones) with a neighbour `y` on `q` of small Breaker degree and a free
/// edge to an endpoint of `p`, such that both resulting paths have more
/// than `min_len` edges.
pub fn near_middle_split(
    state: &GameState,
    p: &[usize],
    q: &[usize],
    rho: f64,
    y_limit: f64,
    min_len: usize,
) -> Option<Split> {
    let l = q.len();
    if l < 3 {
        return None;
    }
    let interior = l - 2;
    let centre = (l - 1) / 2;
    let h = (rho * interior as f64 / 2.0).floor() as usize;
    let lo = centre.saturating_sub(h).max(1);
    let hi = (centre + h).min(l - 2);
    let ends = if p.len() == 1 { vec![p[0]] } else { vec![p[0], p[p.len() - 1]] };
    let mut best: Option<Split> = None;
    for pos in lo..=hi {
        let x = q[pos];
        if best.as_ref().is_some_and(|b| b.x < x) {
            continue;
        }
        let Some(&u) = ends.iter().filter(|&&u| state.pair_free(u, x)).min() else { continue };
        for ypos in [pos - 1, pos + 1] {
            let y = q[ypos];
            if (state.deg_b(y) as f64) >= y_limit {
                continue;
            }
            // Part with x (joined to p) and part with y.
            let (x_part, y_part) = if ypos > pos { (pos, l - 1 - ypos) } else { (l - 1 - pos, ypos) };
            let joined = p.len() - 1 + 1 + x_part;
            if joined <= min_len || y_part <= min_len {
                continue;
            }
            let cand = Split { join: Edge::new(u, x), forgotten: Edge::new(x, y), u, x, y };
            if best.as_ref().is_none_or(|b| x < b.x || (x == b.x && y < b.y)) {
                best = Some(cand);
            }
        }
    }
    best
}

/// The split applied to the sequences: `(p + x-part, y-part)`.
pub fn apply_split(p: &[usize], q: &[usize], s: &Split) -> (Vec<usize>, Vec<usize>) {
    let pos = q.iter().position(|&v| v == s.x).expect("x on q");
    let ypos = q.iter().position(|&v| v == s.y).expect("y on q");
    let (mut x_part, y_part): (Vec<usize>, Vec<usize>) = if ypos > pos {
        (q[..=pos].to_vec(), q[ypos..].to_vec())
    } else {
        (q[pos..].to_vec(), q[..=ypos].to_vec())
    };
    // x-part starting at x.
    if x_part[0] != s.x {
        x_part.reverse();
    }
    let mut joined: Vec<usize> = if p[p.len() - 1] == s.u { p.to_vec() } else { p.iter().rev().copied().collect() };
    joined.extend(x_part);
    (joined, y_part)
}

/// Pósa rotation of `path` (oriented from the rotating end) at
/// `x = path[k]`, `x' = path[k+1]`: adds `{path[0], x'}` and drops
/// `{x, x'}`, so the path now starts at `x`.
pub fn rotate_front(path: &[usize], k: usize) -> Vec<usize> {
    let mut out: Vec<usize> = path[..=k].iter().rev().copied().collect();
    out.extend_from_slice(&path[k + 1..]);
    out
}

/// Bookkeeping of one stage-4 phase.
#[derive(Clone, Debug)]
pub struct Phase {
    pub index: usize,
    /// Both paths oriented from their rotating end `v¹`.
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub id1: usize,
    pub id2: usize,
    /// Positions `k` of chosen `x_i = p1[k]` (and `y_i = p2[k]`).
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
    pub moves: usize,
}

impl Phase {
    fn new(index: usize, p1: Vec<usize>, p2: Vec<usize>, id1: usize, id2: usize) -> Self {
        Phase { index, p1, p2, id1, id2, xs: Vec::new(), ys: Vec::new(), moves: 0 }
    }

    /// `v¹_{P1}, x_1, ...` with the rotated path that starts there.
    fn p1_ends(&self) -> Vec<(usize, Option<usize>)> {
        std::iter::once((self.p1[0], None)).chain(self.xs.iter().map(|&k| (self.p1[k], Some(k)))).collect()
    }

    fn p2_ends(&self) -> Vec<(usize, Option<usize>)> {
        std::iter::once((self.p2[0], None)).chain(self.ys.iter().map(|&k| (self.p2[k], Some(k)))).collect()
    }

    /// The joined path through `{u, w}`.
    pub fn joined(&self, k1: Option<usize>, k2: Option<usize>) -> Vec<usize> {
        let a = k1.map_or_else(|| self.p1.clone(), |k| rotate_front(&self.p1, k));
        let b = k2.map_or_else(|| self.p2.clone(), |k| rotate_front(&self.p2, k));
        let mut out: Vec<usize> = a.into_iter().rev().collect();
        out.extend(b);
        out
    }
}

/// Stage-5 bookkeeping on the Hamilton path `path`.
#[derive(Clone, Debug)]
struct Closing {
    path: Vec<usize>,
    /// Last position of the left half.
    half: usize,
    xs: Vec<usize>,
    ys: Vec<usize>,
    moves: usize,
}

impl Closing {
    fn left_ends(&self) -> Vec<(usize, Option<usize>)> {
        std::iter::once((self.path[0], None)).chain(self.xs.iter().map(|&k| (self.path[k], Some(k)))).collect()
    }

    fn right_ends(&self) -> Vec<(usize, Option<usize>)> {
        let last = self.path.len() - 1;
        std::iter::once((self.path[last], None)).chain(self.ys.iter().map(|&k| (self.path[k], Some(k)))).collect()
    }

    /// Hamilton path from the left end `u` to the right end `w`.
    fn order(&self, kl: Option<usize>, kr: Option<usize>) -> Vec<usize> {
        let mut p = self.path.clone();
        if let Some(k) = kl {
            p = rotate_front(&p, k);
        }
        if let Some(k) = kr {
            // Mirror of a front rotation at the back end.
            p.reverse();
            let kk = p.len() - 1 - k;
            p = rotate_front(&p, kk);
            p.reverse();
        }
        p
    }
}

pub struct HvsMaker {
    cfg: HvsConfig,
    n: usize,
    b: usize,
    ell: usize,
    ps: Option<PathSystem>,
    stage: u32,
    stage_moves: [usize; 5],
    min_len: usize,
    phase: Option<Phase>,
    phases: usize,
    phase_lengths: Vec<usize>,
    closing: Option<Closing>,
    cycle: Option<Vec<usize>>,
    error: Option<String>,
}

impl HvsMaker {
    pub fn new(cfg: HvsConfig, n: usize, b: usize) -> Result<Self, MakerError> {
        if b < 2 {
            return Err(MakerError::PreconditionViolated(format!("bias {b} < 2")));
        }
        if let Some(max) = cfg.max_bias {
            if b > max {
                return Err(MakerError::PreconditionViolated(format!("bias {b} above configured maximum {max}")));
            }
        }
        Ok(HvsMaker {
            ell: cfg.stage1_moves(n, b),
            cfg,
            n,
            b,
            ps: None,
            stage: 1,
            stage_moves: [0; 5],
            min_len: 0,
            phase: None,
            phases: 0,
            phase_lengths: Vec::new(),
            closing: None,
            cycle: None,
            error: None,
        })
    }

    pub fn stage1_length(&self) -> usize {
        self.ell
    }

    pub fn phase_lengths(&self) -> &[usize] {
        &self.phase_lengths
    }

    /// Path-system invariant failure, if validation caught one.
    pub fn error(&self) -> Option<&str> {
        self.error.as_deref()
    }

    fn ps(&self) -> &PathSystem {
        self.ps.as_ref().expect("initialised")
    }

    fn saturation(&self) -> f64 {
        (self.n as f64).powf(self.cfg.saturation_exp)
    }

    /// Free endpoint pair on different paths maximising `key(v)` for `v`
    /// then `d_B(w, End)` for `w`.
    fn pairing(&self, state: &GameState, key_v: impl Fn(usize) -> i64) -> Option<Edge> {
        let ps = self.ps();
        let ends = ps.endpoints();
        let v = *ends.iter().max_by_key(|&&v| (key_v(v), std::cmp::Reverse(v)))?;
        let pv = ps.path_id(v);
        let w = ends
            .iter()
            .copied()
            .filter(|&w| w != v && ps.path_id(w) != pv && state.pair_free(v, w))
            .max_by_key(|&w| (ps.end_deg_b(w), std::cmp::Reverse(w)))?;
        Some(Edge::new(v, w))
    }

    fn max_sum_pair(&self, state: &GameState) -> Option<Edge> {
        let ps = self.ps();
        let ends = ps.endpoints();
        let mut best: Option<(i64, Edge)> = None;
        for (i, &v) in ends.iter().enumerate() {
            for &w in &ends[i + 1..] {
                if ps.path_id(v) == ps.path_id(w) || !state.pair_free(v, w) {
                    continue;
                }
                let s = ps.end_deg_b(v) + ps.end_deg_b(w);
                let e = Edge::new(v, w);
                if best.is_none_or(|(bs, be)| s > bs || (s == bs && e < be)) {
                    best = Some((s, e));
                }
            }
        }
        best.map(|(_, e)| e)
    }

    /// Breaker degree of `x` towards the most-hit path other than its own.
    fn saturated(&self, state: &GameState, x: usize) -> bool {
        let ps = self.ps();
        let own = ps.path_id(x);
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for &u in state.breaker_neighbors(x) {
            let Some(pid) = ps.path_id(u as usize) else { continue };
            if Some(pid) == own {
                continue;
            }
            match counts.iter_mut().find(|c| c.0 == pid) {
                Some(c) => c.1 += 1,
                None => counts.push((pid, 1)),
            }
        }
        counts.iter().any(|&(_, c)| c as f64 >= self.saturation())
    }

    fn start_phase(&mut self, state: &GameState) -> Phase {
        let ps = self.ps();
        let mut ids: Vec<usize> = ps.path_ids().collect();
        ids.sort_by_key(|&id| ps.path(id).iter().min().copied());
        let orient = |id: usize| {
            let p = ps.path(id);
            let (a, z) = (p[0], p[p.len() - 1]);
            let v1 = if (state.deg_b(a), a) <= (state.deg_b(z), z) { a } else { z };
            ps.oriented_from_start(id, v1)
        };
        let (p1, p2) = (orient(ids[0]), orient(ids[1]));
        self.phases += 1;
        Phase::new(self.phases, p1, p2, ids[0], ids[1])
    }

    /// Pair `(k, k+1)` on `path` rotating at `path[0]`, with `path[k]` of
    /// least Breaker degree among eligible ones.
    fn choose_rotation(
        &self,
        state: &GameState,
        path: &[usize],
        positions: std::ops::RangeInclusive<usize>,
        other_v1: usize,
        must_avoid: &[usize],
        check_saturation: bool,
    ) -> Option<usize> {
        let v1 = path[0];
        positions
            .filter(|&k| k + 1 < path.len())
            .filter(|&k| {
                let (x, xp) = (path[k], path[k + 1]);
                state.pair_free(v1, xp)
                    && state.pair_free(other_v1, x)
                    && must_avoid.iter().all(|&y| state.pair_free(x, y))
                    && !(check_saturation && self.saturated(state, x))
            })
            .min_by_key(|&k| (state.deg_b(path[k]), path[k]))
    }

    fn phase_step(&mut self, state: &GameState, notes: &mut Notes) -> Result<Edge, Forfeit> {
        let mut ph = self.phase.take().expect("phase");
        notes.insert("phase".into(), ph.index as f64);
        let m = ph.moves + 1;
        if m % 2 == 1 {
            for (u, k1) in ph.p1_ends() {
                for (w, k2) in ph.p2_ends() {
                    if state.pair_free(u, w) {
                        let joined = ph.joined(k1, k2);
                        let ps = self.ps.as_mut().expect("initialised");
                        if joined.len() != ps.path(ph.id1).len() + ps.path(ph.id2).len() {
                            return Err(Forfeit::new(4, "rotation bookkeeping lost vertices"));
                        }
                        ps.replace(&[ph.id1, ph.id2], vec![joined], state);
                        self.phase_lengths.push(m);
                        notes.insert("phase_end".into(), 1.0);
                        return Ok(Edge::new(u, w));
                    }
                }
            }
            let ys: Vec<usize> = ph.ys.iter().map(|&k| ph.p2[k]).collect();
            let range = 1..=ph.p1.len().saturating_sub(2);
            let k = self
                .choose_rotation(state, &ph.p1, range, ph.p2[0], &ys, true)
                .ok_or_else(|| Forfeit::new(4, format!("phase {}: no eligible pair on the first path", ph.index)))?;
            ph.xs.push(k);
            ph.moves = m;
            let e = Edge::new(ph.p1[0], ph.p1[k + 1]);
            self.phase = Some(ph);
            Ok(e)
        } else {
            let xs: Vec<usize> = ph.xs.iter().map(|&k| ph.p1[k]).collect();
            let range = 1..=ph.p2.len().saturating_sub(2);
            let k = self
                .choose_rotation(state, &ph.p2, range, ph.p1[0], &xs, true)
                .ok_or_else(|| Forfeit::new(4, format!("phase {}: no eligible pair on the second path", ph.index)))?;
            ph.ys.push(k);
            ph.moves = m;
            let e = Edge::new(ph.p2[0], ph.p2[k + 1]);
            self.phase = Some(ph);
            Ok(e)
        }
    }

    fn closing_step(&mut self, state: &GameState, notes: &mut Notes) -> Result<Edge, Forfeit> {
        let mut c = self.closing.take().expect("closing");
        let m = c.moves + 1;
        notes.insert("closing_move".into(), m as f64);
        if m % 2 == 1 {
            for (u, kl) in c.left_ends() {
                for (w, kr) in c.right_ends() {
                    if state.pair_free(u, w) {
                        self.cycle = Some(c.order(kl, kr));
                        return Ok(Edge::new(u, w));
                    }
                }
            }
            let ys: Vec<usize> = c.ys.iter().map(|&k| c.path[k]).collect();
            let last = c.path.len() - 1;
            let k = self
                .choose_rotation(state, &c.path, 1..=c.half.saturating_sub(1), c.path[last], &ys, false)
                .ok_or_else(|| Forfeit::new(5, "no eligible pair in the left half"))?;
            c.xs.push(k);
            c.moves = m;
            let e = Edge::new(c.path[0], c.path[k + 1]);
            self.closing = Some(c);
            Ok(e)
        } else {
            // Work on the reversed path so the right end rotates at the front.
            let rev: Vec<usize> = c.path.iter().rev().copied().collect();
            let l = rev.len();
            let xs: Vec<usize> = c.xs.iter().map(|&k| c.path[k]).collect();
            // Right half positions half+1 ..= l-2 become 1 ..= l-2-half.
            let range = 1..=(l - 2).saturating_sub(c.half + 1);
            let k = self
                .choose_rotation(state, &rev, range, c.path[0], &xs, false)
                .ok_or_else(|| Forfeit::new(5, "no eligible pair in the right half"))?;
            c.ys.push(l - 1 - k);
            c.moves = m;
            let e = Edge::new(rev[0], rev[k + 1]);
            self.closing = Some(c);
            Ok(e)
        }
    }

    fn step(&mut self, state: &GameState) -> Result<(Edge, Notes), Forfeit> {
        if self.ps.is_none() {
            self.ps = Some(PathSystem::new(self.n, 0..self.n));
        }
        let ps = self.ps.as_mut().expect("initialised");
        ps.absorb_breaker(state);
        if self.cfg.validate {
            if let Err(e) = ps.validate(state) {
                self.error = Some(e.clone());
                return Err(Forfeit::new(self.stage, format!("path system invalid: {e}")));
            }
        }
        let mut notes = Notes::new();
        if self.stage == 1 {
            let i = self.stage_moves[0] + 1;
            if i <= self.ell {
                let ps = self.ps();
                let e = if i % 2 == 1 {
                    self.pairing(state, |v| ps.end_deg_b(v))
                } else {
                    self.pairing(state, |v| state.deg_b(v) as i64)
                };
                if let Some(e) = e {
                    notes.insert("stage".into(), 1.0);
                    notes.insert("parity".into(), (i % 2) as f64);
                    let (v, w) = e.endpoints();
                    // `v` is the vertex picked by the first rule.
                    let first = if i % 2 == 1 {
                        if (ps.end_deg_b(v), std::cmp::Reverse(v)) >= (ps.end_deg_b(w), std::cmp::Reverse(w)) { v } else { w }
                    } else if (state.deg_b(v), std::cmp::Reverse(v)) >= (state.deg_b(w), std::cmp::Reverse(w)) {
                        v
                    } else {
                        w
                    };
                    notes.insert("v".into(), first as f64);
                    self.ps.as_mut().expect("initialised").join(v, w, state);
                    return Ok((e, notes));
                }
            }
            self.stage = 2;
        }
        if self.stage == 2 {
            if let Some(e) = self.max_sum_pair(state) {
                notes.insert("stage".into(), 2.0);
                let (v, w) = e.endpoints();
                self.ps.as_mut().expect("initialised").join(v, w, state);
                return Ok((e, notes));
            }
            self.stage = 3;
            let paths = self.ps().path_count();
            self.min_len = match self.cfg.min_path_len {
                PathLenRule::Power(e) => (self.n as f64).powf(e).floor() as usize,
                PathLenRule::MeanFraction(f) => (f * self.n as f64 / paths as f64).floor() as usize,
                PathLenRule::Absolute(l) => l,
            };
        }
        if self.stage == 3 {
            let ps = self.ps();
            let short = ps
                .path_ids()
                .filter(|&id| ps.path(id).len() - 1 <= self.min_len)
                .min_by_key(|&id| (ps.path(id).len(), id));
            if let Some(pid) = short {
                let qid = ps
                    .path_ids()
                    .filter(|&id| id != pid)
                    .max_by_key(|&id| (ps.path(id).len(), std::cmp::Reverse(id)))
                    .ok_or_else(|| Forfeit::new(3, "a single short path"))?;
                let y_limit = self.cfg.y_deg_coeff * self.b as f64 * (self.n as f64).ln();
                let (p, q) = (ps.path(pid).to_vec(), ps.path(qid).to_vec());
                let split = near_middle_split(state, &p, &q, self.cfg.rho, y_limit, self.min_len)
                    .ok_or_else(|| Forfeit::new(3, format!("no eligible near-middle split on a path of length {}", q.len() - 1)))?;
                let (joined, rest) = apply_split(&p, &q, &split);
                let ps = self.ps.as_mut().expect("initialised");
                ps.forget(split.forgotten);
                ps.replace(&[pid, qid], vec![joined, rest], state);
                notes.insert("stage".into(), 3.0);
                return Ok((split.join, notes));
            }
            self.stage = 4;
        }
        if self.stage == 4 {
            if self.ps().path_count() > 1 {
                if self.phase.is_none() {
                    let ph = self.start_phase(state);
                    self.phase = Some(ph);
                }
                notes.insert("stage".into(), 4.0);
                let e = self.phase_step(state, &mut notes)?;
                return Ok((e, notes));
            }
            self.stage = 5;
            let ps = self.ps();
            let id = ps.path_ids().next().expect("one path");
            let path = ps.path(id).to_vec();
            let half = (path.len() - 2).div_ceil(2);
            self.closing = Some(Closing { path, half, xs: Vec::new(), ys: Vec::new(), moves: 0 });
        }
        notes.insert("stage".into(), 5.0);
        let e = self.closing_step(state, &mut notes)?;
        Ok((e, notes))
    }
}

impl MakerStrategy for HvsMaker {
    fn name(&self) -> String {
        "hvs".into()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        if self.cycle.is_some() {
            return MakerAction::Forfeit(Forfeit::new(5, "cycle already closed"));
        }
        match self.step(state) {
            Ok((edge, notes)) => {
                self.stage_moves[self.stage as usize - 1] += 1;
                MakerAction::Claim { edge, notes }
            }
            Err(f) => MakerAction::Forfeit(f),
        }
    }

    fn certificate(&self, _state: &GameState) -> Option<Vec<Edge>> {
        self.cycle.as_deref().map(posa::cycle_edges)
    }

    fn stats(&self) -> Notes {
        let mut out = Notes::new();
        for (i, m) in self.stage_moves.iter().enumerate() {
            out.insert(format!("stage{}_moves", i + 1), *m as f64);
        }
        out.insert("phases".into(), self.phase_lengths.len() as f64);
        out.insert("max_phase_moves".into(), self.phase_lengths.iter().copied().max().unwrap_or(0) as f64);
        out.insert("min_path_len".into(), self.min_len as f64);
        out
    }
}
