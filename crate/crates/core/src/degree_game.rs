//! The minimum-degree game: Maker repeatedly touches the most dangerous
//! vertex, where `dang(v) = d_B(v) - 2b d_M(v)`, until every vertex has
//! Maker degree at least `c`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::board::{Edge, GameState, Player};
use crate::engine::{Forfeit, MakerAction, MakerStrategy, Notes};
use crate::transcript::Transcript;

/// Slack added to floating-point thresholds.
pub const THRESHOLD_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("no dangerous vertex left")]
    NoDangerousVertex,
    #[error("dangerous vertex {0} has no free edge")]
    NoFreeEdge(usize),
}

pub fn danger(state: &GameState, v: usize, b: usize) -> i64 {
    state.deg_b(v) as i64 - 2 * b as i64 * state.deg_m(v) as i64
}

/// `b (2 ln n + 1)`.
pub fn danger_threshold(n: usize, b: usize) -> f64 {
    b as f64 * (2.0 * (n as f64).ln() + 1.0)
}

/// Bias and degree conditions for the degree game on a host graph
/// with minimum degree `min_deg`.
pub fn preconditions_hold(n: usize, b: usize, c: usize, min_deg: usize) -> bool {
    let ln = (n as f64).ln();
    b as f64 <= min_deg as f64 / (4.0 * ln) && (c * (2 * b + 1)) as f64 <= min_deg as f64 / 3.0
}

/// Largest bias allowed by [`preconditions_hold`] on `K_n`, if any.
pub fn max_bias(n: usize, c: usize) -> Option<usize> {
    (1..n).take_while(|&b| preconditions_hold(n, b, c, n - 1)).last()
}

/// Vertices the game is played on, with degrees and dangers counted inside
/// the set only. The full board is the default.
#[derive(Clone, Debug)]
pub struct Domain {
    vertices: Vec<usize>,
    member: Vec<bool>,
}

impl Domain {
    pub fn full(n: usize) -> Self {
        Domain {
            vertices: (0..n).collect(),
            member: vec![true; n],
        }
    }

    pub fn new(n: usize, vertices: &[usize]) -> Self {
        let mut member = vec![false; n];
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        for &v in &vs {
            member[v] = true;
        }
        Domain {
            vertices: vs,
            member,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.member[v]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn deg_m(&self, state: &GameState, v: usize) -> usize {
        state.deg_m_in(v, |u| self.member[u])
    }

    pub fn deg_b(&self, state: &GameState, v: usize) -> usize {
        state.deg_b_in(v, |u| self.member[u])
    }

    pub fn danger(&self, state: &GameState, v: usize, b: usize) -> i64 {
        self.deg_b(state, v) as i64 - 2 * b as i64 * self.deg_m(state, v) as i64
    }

    pub fn free_partners(&self, state: &GameState, v: usize) -> Vec<usize> {
        state.free_neighbors(v, self.vertices.iter().copied())
    }
}

#[derive(Clone, Debug)]
pub enum Partner {
    LowestIndex,
    Random(ChaCha8Rng),
}

impl Partner {
    pub fn random(seed: u64) -> Self {
        Partner::Random(ChaCha8Rng::seed_from_u64(seed))
    }

    fn pick(&mut self, options: &[usize]) -> usize {
        match self {
            Partner::LowestIndex => options[0],
            Partner::Random(rng) => *options.choose(rng).expect("nonempty"),
        }
    }
}

/// One step of the danger strategy inside `domain`: the dangerous vertex
/// (`d_M < c`) of largest danger, lowest index on ties, and a free partner.
pub fn danger_step(
    state: &GameState,
    domain: &Domain,
    c: usize,
    bias: usize,
    partner: &mut Partner,
) -> Result<(usize, Edge, i64), DegreeError> {
    let mut best: Option<(i64, usize)> = None;
    for &v in domain.vertices() {
        if domain.deg_m(state, v) >= c {
            continue;
        }
        let d = domain.danger(state, v, bias);
        if best.is_none_or(|(bd, _)| d > bd) {
            best = Some((d, v));
        }
    }
    let (d, v) = best.ok_or(DegreeError::NoDangerousVertex)?;
    let options = domain.free_partners(state, v);
    if options.is_empty() {
        return Err(DegreeError::NoFreeEdge(v));
    }
    let w = partner.pick(&options);
    Ok((v, Edge::new(v, w), d))
}

/// Deterministic move on the whole board.
pub fn min_degree_maker_move(state: &GameState, c: usize) -> Result<Edge, DegreeError> {
    let domain = Domain::full(state.n());
    danger_step(state, &domain, c, state.bias(), &mut Partner::LowestIndex).map(|(_, e, _)| e)
}

/// Maker strategy for the goal `MINDEG:c`. Each record carries the chosen
/// vertex (`v`) and its danger (`dang`).
pub struct MinDegreeMaker {
    c: usize,
    partner: Partner,
    chosen: Vec<usize>,
}

impl MinDegreeMaker {
    pub fn new(c: usize) -> Self {
        MinDegreeMaker {
            c,
            partner: Partner::LowestIndex,
            chosen: Vec::new(),
        }
    }

    pub fn with_random_partner(c: usize, seed: u64) -> Self {
        MinDegreeMaker {
            c,
            partner: Partner::random(seed),
            chosen: Vec::new(),
        }
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }
}

impl MakerStrategy for MinDegreeMaker {
    fn name(&self) -> String {
        "mindeg".into()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        let domain = Domain::full(state.n());
        match danger_step(state, &domain, self.c, state.bias(), &mut self.partner) {
            Ok((v, edge, d)) => {
                self.chosen.push(v);
                let mut notes = Notes::new();
                notes.insert("stage".into(), 1.0);
                notes.insert("v".into(), v as f64);
                notes.insert("dang".into(), d as f64);
                MakerAction::Claim { edge, notes }
            }
            Err(DegreeError::NoDangerousVertex) => {
                MakerAction::Forfeit(Forfeit::new(1, "finished: no dangerous vertex"))
            }
            Err(DegreeError::NoFreeEdge(v)) => {
                MakerAction::Forfeit(Forfeit::new(1, format!("blocked: vertex {v} has no free edge")))
            }
        }
    }

    fn certificate(&self, state: &GameState) -> Option<Vec<Edge>> {
        (0..state.n())
            .all(|v| state.deg_m(v) >= self.c)
            .then(|| state.maker_edges())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DangerViolation {
    pub move_index: usize,
    pub vertex: usize,
    pub dang: i64,
    pub threshold: f64,
}

/// Replays the transcript and reports, after every record, each dangerous
/// vertex (`d_M <= c-1`) whose danger exceeds `b (2 ln n + 1)`.
/// Transcripts are replayed leniently so synthetic ones can be checked.
pub fn danger_invariant_check(transcript: &Transcript, c: usize, b: usize) -> Vec<DangerViolation> {
    let n = transcript.header.n;
    let threshold = danger_threshold(n, b);
    let mut out = Vec::new();
    let _ = transcript.replay_visit(true, |state, rec| {
        let Some(rec) = rec else { return };
        for v in 0..n {
            if state.deg_m(v) + 1 > c {
                continue;
            }
            let d = danger(state, v, b);
            if d as f64 > threshold + THRESHOLD_SLACK {
                out.push(DangerViolation {
                    move_index: rec.index,
                    vertex: v,
                    dang: d,
                    threshold,
                });
            }
        }
    });
    out
}

/// Vertices that can no longer reach Maker degree `c` on the final board.
pub fn blocked_vertices(state: &GameState, c: usize) -> Vec<usize> {
    (0..state.n())
        .filter(|&v| state.deg_m(v) < c && state.deg_m(v) + state.free_degree(v) < c)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AverageDangerStep {
    /// Index `i` of the round in the backward chain `A_i`.
    pub round: usize,
    pub active_size: usize,
    pub changed: bool,
    pub difference: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AverageDangerReport {
    pub steps: usize,
    pub violations: Vec<AverageDangerStep>,
    /// Sum of all round differences, against `-2b (H_{|A|} - 1)`.
    pub total: f64,
    pub total_bound: f64,
}

/// Round-by-round average-danger monitor. With `v_1..v_s` the vertices
/// the strategy chose (the `v` note on Maker records) and
/// `A_i = {v_{s-i}, .., v_s}`, the average danger of `A_i` just before
/// Breaker's `(s-i)`-th move, minus that of `A_{i-1}` just before Breaker's
/// `(s-i+1)`-th move, is at least 0 when `A_i = A_{i-1}` and at least
/// `-2b/|A_i|` otherwise.
pub fn average_danger_check(transcript: &Transcript, b: usize) -> AverageDangerReport {
    let chosen: Vec<usize> = transcript
        .maker_records()
        .filter_map(|r| r.note("v").map(|v| v as usize))
        .collect();
    let s = chosen.len();
    if s < 2 {
        return AverageDangerReport::default();
    }
    // suffix[j] = distinct vertices of v_j..v_s (0-based j).
    let n = transcript.header.n;
    let mut suffix: Vec<Vec<usize>> = vec![Vec::new(); s];
    let mut seen = vec![false; n];
    let mut cur = Vec::new();
    for j in (0..s).rev() {
        if !seen[chosen[j]] {
            seen[chosen[j]] = true;
            cur.push(chosen[j]);
        }
        suffix[j] = cur.clone();
    }
    // avg[j] = average danger of suffix[j] just before Breaker's (j+1)-th move.
    let mut avg = vec![0.0; s];
    let mut breaker_turn = 0;
    let _ = transcript.replay_visit(true, |state, rec| {
        let next_is_breaker = match rec {
            None => true,
            Some(r) => r.player == Player::Maker,
        };
        if next_is_breaker && breaker_turn < s {
            let set = &suffix[breaker_turn];
            let total: i64 = set.iter().map(|&v| danger(state, v, b)).sum();
            avg[breaker_turn] = total as f64 / set.len() as f64;
            breaker_turn += 1;
        }
    });
    let mut report = AverageDangerReport {
        steps: s - 1,
        ..Default::default()
    };
    for j in 0..s - 1 {
        let changed = suffix[j].len() != suffix[j + 1].len();
        let size = suffix[j].len();
        let bound = if changed { -2.0 * b as f64 / size as f64 } else { 0.0 };
        let difference = avg[j] - avg[j + 1];
        report.total += difference;
        if difference < bound - THRESHOLD_SLACK {
            report.violations.push(AverageDangerStep {
                round: s - 1 - j,
                active_size: size,
                changed,
                difference,
                bound,
            });
        }
    }
    let r = suffix[0].len() as u64;
    report.total_bound = -2.0 * b as f64 * (crate::boxgame::harmonic(r) - 1.0);
    report
}
