//! Replay monitors. Each one re-executes a transcript on a fresh board and
//! checks an invariant the strategy that produced it is supposed to keep.
//! They only read the records and their notes, never strategy internals.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::board::{Edge, GameState, Player};
use crate::degree_game;
use crate::engine::GoalKind;
use crate::transcript::{MoveRecord, Transcript, TranscriptError};

const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Monitor {
    /// Perfect-matching stage 1: `D <= 2b` and `Δ <= δ|U|`.
    Claim1,
    /// Path-system stage 1, even moves: the chosen endpoints' `End` degrees sum to at least `D`.
    Claim2,
    /// Path-system stage 1, odd moves: `D <= 4b` and `Δ < δ|End|`.
    Claim3,
    /// End of path-system stage 1: `d_B(v,End) < δ|End| + b`, `d_B(v) < 16 b ln n`.
    Stage1Caps,
    /// Rotation phases take at most `2b + 1` Maker moves.
    Phase,
    /// Expander strategy: endpoints have `d_B < 24 b ln n` after stage 2.
    EndCap,
    /// Degree game danger bound.
    Danger,
    /// Delay breaker: the clique is complete after every Breaker move.
    Clique,
}

pub const ALL: [Monitor; 8] = [
    Monitor::Claim1,
    Monitor::Claim2,
    Monitor::Claim3,
    Monitor::Stage1Caps,
    Monitor::Phase,
    Monitor::EndCap,
    Monitor::Danger,
    Monitor::Clique,
];

impl Monitor {
    pub fn name(self) -> &'static str {
        match self {
            Monitor::Claim1 => "claim1",
            Monitor::Claim2 => "claim2",
            Monitor::Claim3 => "claim3",
            Monitor::Stage1Caps => "stage1_caps",
            Monitor::Phase => "phase",
            Monitor::EndCap => "end_cap",
            Monitor::Danger => "danger",
            Monitor::Clique => "clique",
        }
    }
}

impl fmt::Display for Monitor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Monitor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ALL.iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown monitor `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub monitor: Monitor,
    pub move_index: usize,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] move {}: {}", self.monitor, self.move_index, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonitorParams {
    /// `δ` of the perfect-matching strategy.
    pub delta_pm: f64,
    /// `δ` of the path-system strategy.
    pub delta_hvs: f64,
}

impl Default for MonitorParams {
    fn default() -> Self {
        MonitorParams {
            delta_pm: 0.1,
            delta_hvs: 0.999,
        }
    }
}

/// Monitors that make sense for the strategies named in the header.
pub fn applicable(t: &Transcript) -> Vec<Monitor> {
    let mut out = Vec::new();
    match t.header.maker.as_str() {
        "pm" => out.push(Monitor::Claim1),
        "hvs" => out.extend([Monitor::Claim2, Monitor::Claim3, Monitor::Stage1Caps, Monitor::Phase]),
        "hs" => out.push(Monitor::EndCap),
        _ => {}
    }
    if matches!(t.header.goal, GoalKind::MinDegree(_)) {
        out.push(Monitor::Danger);
    }
    if t.header.breaker.starts_with("clique") {
        out.push(Monitor::Clique);
    }
    out
}

pub fn run(t: &Transcript, monitors: &[Monitor], params: &MonitorParams) -> Result<Vec<Violation>, TranscriptError> {
    let mut out = Vec::new();
    for &m in monitors {
        out.extend(match m {
            Monitor::Claim1 => claim1(t, params.delta_pm)?,
            Monitor::Claim2 | Monitor::Claim3 | Monitor::Stage1Caps => {
                path_stage1(t, params.delta_hvs)?.into_iter().filter(|v| v.monitor == m).collect()
            }
            Monitor::Phase => phase_lengths(t),
            Monitor::EndCap => end_cap(t)?,
            Monitor::Danger => danger(t),
            Monitor::Clique => clique(t)?,
        });
    }
    out.sort_by_key(|v| v.move_index);
    Ok(out)
}

/// Weighted Breaker degrees into a vertex multiset `End`, kept up to date
/// edge by edge. `w[v]` is the multiplicity of `v` in `End`.
#[derive(Clone, Debug)]
pub struct EndTracker {
    weight: fn(usize) -> i64,
    w: Vec<i64>,
    excluded: Vec<bool>,
    end_deg: Vec<i64>,
    /// `Σ_v w[v] d_B(v, End)`.
    sum: i64,
    size: i64,
}

impl EndTracker {
    pub fn new(state: &GameState, weight: fn(usize) -> i64) -> Self {
        let n = state.n();
        let w: Vec<i64> = (0..n).map(|v| weight(state.deg_m(v))).collect();
        let mut t = EndTracker {
            weight,
            size: w.iter().sum(),
            w,
            excluded: vec![false; n],
            end_deg: vec![0; n],
            sum: 0,
        };
        for e in state.breaker_edges() {
            t.breaker_edge(e);
        }
        t
    }

    fn breaker_edge(&mut self, e: Edge) {
        let (u, v) = e.endpoints();
        self.end_deg[u] += self.w[v];
        self.end_deg[v] += self.w[u];
        self.sum += 2 * self.w[u] * self.w[v];
    }

    fn set_weight(&mut self, state: &GameState, x: usize, new: i64) {
        let delta = new - self.w[x];
        if delta == 0 {
            return;
        }
        for &y in state.breaker_neighbors(x) {
            self.end_deg[y as usize] += delta;
        }
        self.sum += 2 * delta * self.end_deg[x];
        self.size += delta;
        self.w[x] = new;
    }

    /// Applies `rec`; `state` is the board after it.
    pub fn apply(&mut self, state: &GameState, rec: &MoveRecord) {
        match rec.player {
            Player::Breaker => {
                for &e in &rec.edges {
                    self.breaker_edge(e);
                }
            }
            Player::Maker => {
                for &e in &rec.edges {
                    let (u, v) = e.endpoints();
                    for x in [u, v] {
                        let nw = if self.excluded[x] { 0 } else { (self.weight)(state.deg_m(x)) };
                        self.set_weight(state, x, nw);
                    }
                }
            }
        }
    }

    /// Drops `x` from `End` for good.
    pub fn exclude(&mut self, state: &GameState, x: usize) {
        self.excluded[x] = true;
        self.set_weight(state, x, 0);
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.w[v]
    }

    pub fn end_deg(&self, v: usize) -> i64 {
        self.end_deg[v]
    }

    /// `|End|` with multiplicity.
    pub fn size(&self) -> i64 {
        self.size
    }

    /// Average `d_B(v, End)` over `End`.
    pub fn average(&self) -> f64 {
        if self.size == 0 {
            0.0
        } else {
            self.sum as f64 / self.size as f64
        }
    }

    /// Largest `d_B(v, End)` over `v` in `End`.
    pub fn max(&self) -> i64 {
        (0..self.w.len()).filter(|&v| self.w[v] > 0).map(|v| self.end_deg[v]).max().unwrap_or(0)
    }
}

fn unmatched(dm: usize) -> i64 {
    i64::from(dm == 0)
}

fn path_end(dm: usize) -> i64 {
    match dm {
        0 => 2,
        1 => 1,
        _ => 0,
    }
}

fn replay_tracked(
    t: &Transcript,
    weight: fn(usize) -> i64,
    mut visit: impl FnMut(&mut EndTracker, &GameState, &MoveRecord, bool),
) -> Result<(), TranscriptError> {
    let init = t.initial_state()?;
    let mut tracker = EndTracker::new(&init, weight);
    t.replay_visit(true, |state, rec| {
        let Some(rec) = rec else { return };
        visit(&mut tracker, state, rec, true);
        tracker.apply(state, rec);
        visit(&mut tracker, state, rec, false);
    })?;
    Ok(())
}

fn claim1(t: &Transcript, delta: f64) -> Result<Vec<Violation>, TranscriptError> {
    let b = t.header.b as f64;
    let mut out = Vec::new();
    replay_tracked(t, unmatched, |tr, _, rec, before| {
        if before || rec.player != Player::Maker || rec.stage() != Some(1) {
            return;
        }
        let (d, mx, u) = (tr.average(), tr.max(), tr.size());
        if d > 2.0 * b + EPS {
            out.push(Violation {
                monitor: Monitor::Claim1,
                move_index: rec.index,
                detail: format!("D = {d:.3} > 2b = {}", 2.0 * b),
            });
        }
        if mx as f64 > delta * u as f64 + EPS {
            out.push(Violation {
                monitor: Monitor::Claim1,
                move_index: rec.index,
                detail: format!("max d_B(v,U) = {mx} > δ|U| = {:.3}", delta * u as f64),
            });
        }
    })?;
    Ok(out)
}

fn path_stage1(t: &Transcript, delta: f64) -> Result<Vec<Violation>, TranscriptError> {
    let b = t.header.b as f64;
    let deg_cap = 16.0 * b * (t.header.n as f64).ln();
    let mut out = Vec::new();
    let mut last_caps: Vec<Violation> = Vec::new();
    replay_tracked(t, path_end, |tr, state, rec, before| {
        if rec.player != Player::Maker || rec.stage() != Some(1) {
            return;
        }
        let parity = rec.note("parity").map(|p| p as u32);
        if before {
            if parity == Some(0) {
                let Some(&e) = rec.edges.first() else { return };
                let (v, w) = e.endpoints();
                let got = tr.end_deg(v) + tr.end_deg(w);
                let d = tr.average();
                if (got as f64) + EPS < d {
                    out.push(Violation {
                        monitor: Monitor::Claim2,
                        move_index: rec.index,
                        detail: format!("d_B(v,End) + d_B(w,End) = {got} < D = {d:.3}"),
                    });
                }
            }
            return;
        }
        if parity == Some(1) {
            let (d, mx, size) = (tr.average(), tr.max(), tr.size());
            if d > 4.0 * b + EPS {
                out.push(Violation {
                    monitor: Monitor::Claim3,
                    move_index: rec.index,
                    detail: format!("D = {d:.3} > 4b = {}", 4.0 * b),
                });
            }
            if mx as f64 >= delta * size as f64 {
                out.push(Violation {
                    monitor: Monitor::Claim3,
                    move_index: rec.index,
                    detail: format!("Δ = {mx} >= δ|End| = {:.3}", delta * size as f64),
                });
            }
        }
        last_caps.clear();
        let end_cap = delta * tr.size() as f64 + b;
        for v in 0..state.n() {
            if tr.weight(v) == 0 {
                continue;
            }
            if tr.end_deg(v) as f64 >= end_cap {
                last_caps.push(Violation {
                    monitor: Monitor::Stage1Caps,
                    move_index: rec.index,
                    detail: format!("d_B({v},End) = {} >= δ|End| + b = {end_cap:.3}", tr.end_deg(v)),
                });
            }
            if state.deg_b(v) as f64 >= deg_cap {
                last_caps.push(Violation {
                    monitor: Monitor::Stage1Caps,
                    move_index: rec.index,
                    detail: format!("d_B({v}) = {} >= 16 b ln n = {deg_cap:.3}", state.deg_b(v)),
                });
            }
        }
    })?;
    out.extend(last_caps);
    Ok(out)
}

fn phase_lengths(t: &Transcript) -> Vec<Violation> {
    let limit = 2 * t.header.b + 1;
    let mut out = Vec::new();
    let mut current: Option<(i64, usize)> = None;
    for rec in t.maker_records() {
        let Some(p) = rec.note("phase").map(|p| p as i64) else { continue };
        let count = match current {
            Some((q, c)) if q == p => c + 1,
            _ => 1,
        };
        current = Some((p, count));
        if count == limit + 1 {
            out.push(Violation {
                monitor: Monitor::Phase,
                move_index: rec.index,
                detail: format!("phase {p} exceeds 2b+1 = {limit} moves"),
            });
        }
    }
    out
}

fn end_cap(t: &Transcript) -> Result<Vec<Violation>, TranscriptError> {
    let cap = 24.0 * t.header.b as f64 * (t.header.n as f64).ln();
    let n = t.header.n;
    let mut in_expander = vec![false; n];
    let mut last: Option<(usize, Vec<Violation>)> = None;
    t.replay_visit(true, |state, rec| {
        let Some(rec) = rec else { return };
        if rec.player != Player::Maker {
            return;
        }
        if rec.note("expander").is_some() {
            for e in &rec.edges {
                let (u, v) = e.endpoints();
                in_expander[u] = true;
                in_expander[v] = true;
            }
        }
        if !matches!(rec.stage(), Some(1) | Some(2)) {
            return;
        }
        let mut found = Vec::new();
        for v in 0..n {
            if in_expander[v] || state.deg_m(v) > 1 {
                continue;
            }
            if state.deg_b(v) as f64 >= cap {
                found.push(Violation {
                    monitor: Monitor::EndCap,
                    move_index: rec.index,
                    detail: format!("endpoint {v} has d_B = {} >= 24 b ln n = {cap:.3}", state.deg_b(v)),
                });
            }
        }
        last = Some((rec.index, found));
    })?;
    Ok(last.map(|(_, v)| v).unwrap_or_default())
}

fn danger(t: &Transcript) -> Vec<Violation> {
    let GoalKind::MinDegree(c) = t.header.goal else { return Vec::new() };
    degree_game::danger_invariant_check(t, c, t.header.b)
        .into_iter()
        .map(|v| Violation {
            monitor: Monitor::Danger,
            move_index: v.move_index,
            detail: format!("dang({}) = {} > {:.3}", v.vertex, v.dang, v.threshold),
        })
        .collect()
}

/// Clique members named by the `c<i>` notes of a Breaker record.
pub fn clique_members(rec: &MoveRecord) -> Vec<usize> {
    let mut m: Vec<(usize, usize)> = rec
        .annotations
        .iter()
        .filter_map(|(k, &v)| {
            let i = k.strip_prefix('c')?.parse::<usize>().ok()?;
            Some((i, v as usize))
        })
        .collect();
    m.sort_unstable();
    m.into_iter().map(|(_, v)| v).collect()
}

/// Vertices touched by the time the clique first reached `size`, from the
/// `clique`/`touched` notes.
pub fn touched_at_size(t: &Transcript, size: usize) -> Option<usize> {
    t.records
        .iter()
        .filter(|r| r.player == Player::Breaker)
        .find(|r| r.note("clique").is_some_and(|c| c as usize >= size))
        .and_then(|r| r.note("touched"))
        .map(|x| x as usize)
}

fn clique(t: &Transcript) -> Result<Vec<Violation>, TranscriptError> {
    let mut out = Vec::new();
    t.replay_visit(true, |state, rec| {
        let Some(rec) = rec else { return };
        if rec.player != Player::Breaker {
            return;
        }
        let members = clique_members(rec);
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if u == v || !state.is_breaker(Edge::new(u, v)) {
                    out.push(Violation {
                        monitor: Monitor::Clique,
                        move_index: rec.index,
                        detail: format!("clique pair {{{u},{v}}} is not Breaker's"),
                    });
                }
            }
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transcript::TranscriptHeader;
    use std::collections::BTreeMap;

    fn header(n: usize, b: usize, maker: &str, breaker: &str) -> TranscriptHeader {
        TranscriptHeader {
            n,
            b,
            goal: GoalKind::HamiltonCycle,
            maker: maker.into(),
            breaker: breaker.into(),
            seed: 0,
            config_hash: String::new(),
            preclaimed: Vec::new(),
        }
    }

    fn rec(i: usize, p: Player, edges: &[(usize, usize)], notes: &[(&str, f64)]) -> MoveRecord {
        let notes: BTreeMap<String, f64> = notes.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        MoveRecord::new(i, p, edges.iter().map(|&(a, b)| Edge::new(a, b)).collect(), notes)
    }

    /// Direct recomputation of the tracker quantities.
    fn brute(state: &GameState, weight: fn(usize) -> i64) -> (i64, i64, i64) {
        let n = state.n();
        let w: Vec<i64> = (0..n).map(|v| weight(state.deg_m(v))).collect();
        let ed: Vec<i64> = (0..n)
            .map(|v| state.breaker_neighbors(v).iter().map(|&y| w[y as usize]).sum())
            .collect();
        let sum = (0..n).map(|v| w[v] * ed[v]).sum();
        let mx = (0..n).filter(|&v| w[v] > 0).map(|v| ed[v]).max().unwrap_or(0);
        (sum, w.iter().sum(), mx)
    }

    #[test]
    fn tracker_matches_recount() {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 14;
        let mut s = GameState::new(n, 2).unwrap();
        for weight in [unmatched as fn(usize) -> i64, path_end] {
            let mut tr = EndTracker::new(&s, weight);
            let mut idx = 0;
            while s.free_count() > 0 {
                let mut free: Vec<Edge> = s.free_edges().collect();
                free.shuffle(&mut rng);
                let player = if idx % 3 == 0 { Player::Maker } else { Player::Breaker };
                let take: Vec<Edge> = free.into_iter().take(if player == Player::Maker { 1 } else { 2 }).collect();
                s.force_claim(player, &take).unwrap();
                let r = MoveRecord::new(idx, player, take, Notes::new());
                tr.apply(&s, &r);
                let (sum, size, mx) = brute(&s, weight);
                assert_eq!((tr.sum, tr.size(), tr.max()), (sum, size, mx));
                idx += 1;
            }
            s = GameState::new(n, 2).unwrap();
        }
    }

    use crate::engine::Notes;

    #[test]
    fn claim1_flags_concentrated_breaker_degrees() {
        let mut t = Transcript::new(header(8, 1, "pm", "x"));
        t.header.goal = GoalKind::PerfectMatching;
        t.push(rec(0, Player::Breaker, &[(0, 1)], &[]));
        t.push(rec(1, Player::Maker, &[(2, 3)], &[("stage", 1.0)]));
        t.push(rec(2, Player::Breaker, &[(0, 4)], &[]));
        t.push(rec(3, Player::Maker, &[(5, 6)], &[("stage", 1.0)]));
        // After move 3: U = {0,1,4,7}, B[U] = {01, 04}; D = 4/4 = 1, Δ = 2.
        let v = run(&t, &[Monitor::Claim1], &MonitorParams { delta_pm: 0.4, ..Default::default() }).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].move_index, 3);
        let v = run(&t, &[Monitor::Claim1], &MonitorParams { delta_pm: 0.5, ..Default::default() }).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn claim2_uses_selection_time_degrees() {
        let mut t = Transcript::new(header(6, 2, "hvs", "x"));
        t.push(rec(0, Player::Breaker, &[(0, 1), (0, 2)], &[]));
        t.push(rec(1, Player::Maker, &[(0, 3)], &[("stage", 1.0), ("parity", 1.0)]));
        t.push(rec(2, Player::Breaker, &[(4, 1), (4, 2)], &[]));
        // End weights: 0,3 -> 1; others 2. d_B(4,End)=4, d_B(5,End)=0.
        // D = (2*(1*2) + 2*(1*2) + 2*(2*2) + 2*(2*2)) / 10 = 24/10.
        t.push(rec(3, Player::Maker, &[(4, 5)], &[("stage", 1.0), ("parity", 0.0)]));
        let v = run(&t, &[Monitor::Claim2], &MonitorParams::default()).unwrap();
        assert!(v.is_empty(), "{v:?}");
        let mut t2 = t.clone();
        t2.records[3] = rec(3, Player::Maker, &[(3, 5)], &[("stage", 1.0), ("parity", 0.0)]);
        let v = run(&t2, &[Monitor::Claim2], &MonitorParams::default()).unwrap();
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn phase_monitor_counts_moves() {
        let mut t = Transcript::new(header(10, 1, "hvs", "x"));
        let mut i = 0;
        for p in [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0] {
            t.push(rec(i, Player::Breaker, &[], &[]));
            t.push(rec(i + 1, Player::Maker, &[], &[("phase", p)]));
            i += 2;
        }
        let v = phase_lengths(&t);
        assert_eq!(v.len(), 1);
        assert!(v[0].detail.contains("phase 1"));
    }

    #[test]
    fn clique_monitor_replays_members() {
        let mut t = Transcript::new(header(6, 3, "x", "clique_pm"));
        t.push(rec(0, Player::Breaker, &[(0, 1), (0, 2), (1, 2)], &[("c0", 0.0), ("c1", 1.0), ("c2", 2.0)]));
        t.push(rec(1, Player::Maker, &[(3, 4)], &[]));
        t.push(rec(2, Player::Breaker, &[(0, 5)], &[("c0", 0.0), ("c1", 1.0), ("c2", 5.0)]));
        let v = run(&t, &[Monitor::Clique], &MonitorParams::default()).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].move_index, 2);
    }

    #[test]
    fn names_round_trip() {
        for m in ALL {
            assert_eq!(m.name().parse::<Monitor>().unwrap(), m);
        }
        assert!("nope".parse::<Monitor>().is_err());
    }
}
