//! Text-mode play: a human types Breaker's edges, a strategy plays Maker.

use std::io::{BufRead, Write};
use std::sync::{Arc, Mutex};

use super::{HarnessError, MakerSpec};
use crate::board::{Edge, GameState};
use crate::engine::{play, BreakerAction, BreakerStrategy, GameResult, GoalKind, MakerAction, MakerStrategy, Notes, PlayOptions};

type LastMove = Arc<Mutex<Option<(Edge, Notes)>>>;

struct Watched<'a> {
    inner: &'a mut dyn MakerStrategy,
    last: LastMove,
}

impl MakerStrategy for Watched<'_> {
    fn name(&self) -> String {
        self.inner.name()
    }

    fn next_move(&mut self, state: &GameState) -> MakerAction {
        let a = self.inner.next_move(state);
        if let MakerAction::Claim { edge, notes } = &a {
            *self.last.lock().expect("not poisoned") = Some((*edge, notes.clone()));
        }
        a
    }

    fn certificate(&self, state: &GameState) -> Option<Vec<Edge>> {
        self.inner.certificate(state)
    }

    fn stats(&self) -> Notes {
        self.inner.stats()
    }
}

/// Parses one turn: whitespace or comma separated vertex numbers, read in
/// pairs. Returns the reason when the turn is not legal.
pub fn parse_turn(state: &GameState, line: &str) -> Result<Vec<Edge>, String> {
    let mut nums = Vec::new();
    for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        nums.push(tok.parse::<usize>().map_err(|_| format!("`{tok}` is not a vertex number"))?);
    }
    if nums.len() % 2 == 1 {
        return Err("odd number of vertices".into());
    }
    let want = state.free_count().min(state.bias());
    if nums.len() / 2 != want {
        return Err(format!("expected {want} edges, got {}", nums.len() / 2));
    }
    let mut edges: Vec<Edge> = Vec::with_capacity(want);
    for p in nums.chunks(2) {
        let (u, v) = (p[0], p[1]);
        if u >= state.n() || v >= state.n() {
            return Err(format!("vertex out of range in {u} {v} (n = {})", state.n()));
        }
        let e = Edge::try_new(u, v).ok_or_else(|| format!("{u} {v} is a loop"))?;
        if let Some(owner) = state.owner(e) {
            return Err(format!("{u} {v} is already claimed by {owner:?}"));
        }
        if edges.contains(&e) {
            return Err(format!("{u} {v} given twice"));
        }
        edges.push(e);
    }
    Ok(edges)
}

/// Maker's paths (components that are paths) and a degree histogram.
pub fn board_summary(state: &GameState) -> String {
    let n = state.n();
    let mut out = String::new();
    let mut hist = std::collections::BTreeMap::new();
    for v in 0..n {
        *hist.entry(state.deg_m(v)).or_insert(0usize) += 1;
    }
    out.push_str(&format!(
        "Maker {} edges, Breaker {} edges, {} free\nMaker degrees:",
        state.maker_edge_count(),
        state.breaker_edge_count(),
        state.free_count()
    ));
    for (d, c) in hist {
        out.push_str(&format!(" {d}:{c}"));
    }
    out.push('\n');
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] || state.deg_m(s) != 1 {
            continue;
        }
        let mut path = vec![s];
        seen[s] = true;
        let mut prev = usize::MAX;
        let mut cur = s;
        loop {
            let next = state
                .maker_neighbors(cur)
                .iter()
                .map(|&x| x as usize)
                .find(|&x| x != prev);
            match next {
                Some(x) if !seen[x] && state.deg_m(x) <= 2 => {
                    seen[x] = true;
                    path.push(x);
                    prev = cur;
                    cur = x;
                }
                _ => break,
            }
        }
        if state.deg_m(*path.last().expect("nonempty")) == 1 {
            let p: Vec<String> = path.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("path: {}\n", p.join("-")));
        }
    }
    out
}

/// Reads Breaker's turns from `input`. `resign` or end of input resigns;
/// from then on Breaker passes.
pub struct HumanBreaker<R, W> {
    input: R,
    output: W,
    last: LastMove,
    resigned: bool,
}

impl<R: BufRead + Send, W: Write + Send> HumanBreaker<R, W> {
    fn say(&mut self, text: &str) {
        let _ = self.output.write_all(text.as_bytes());
        let _ = self.output.flush();
    }
}

impl<R: BufRead + Send, W: Write + Send> BreakerStrategy for HumanBreaker<R, W> {
    fn name(&self) -> String {
        "human".into()
    }

    fn next_move(&mut self, state: &GameState) -> BreakerAction {
        if self.resigned {
            return BreakerAction::Pass;
        }
        let mut header = String::new();
        if let Some((e, notes)) = self.last.lock().expect("not poisoned").clone() {
            let ann: Vec<String> = notes.iter().map(|(k, v)| format!("{k}={v}")).collect();
            header.push_str(&format!("Maker claimed {} {} [{}]\n", e.u, e.v, ann.join(" ")));
        }
        header.push_str(&board_summary(state));
        self.say(&header);
        loop {
            let want = state.free_count().min(state.bias());
            self.say(&format!("Breaker, claim {want} edges as `u v` pairs (or `resign`): "));
            let mut line = String::new();
            match self.input.read_line(&mut line) {
                Ok(0) | Err(_) => {
                    self.resigned = true;
                    self.say("\nresigned\n");
                    return BreakerAction::Pass;
                }
                Ok(_) => {}
            }
            if line.trim() == "resign" {
                self.resigned = true;
                return BreakerAction::Pass;
            }
            match parse_turn(state, &line) {
                Ok(edges) => return BreakerAction::claim(edges),
                Err(reason) => self.say(&format!("invalid: {reason}\n")),
            }
        }
    }
}

pub fn interactive_play<R: BufRead + Send, W: Write + Send>(
    n: usize,
    b: usize,
    maker: &MakerSpec,
    goal: GoalKind,
    seed: u64,
    input: R,
    output: W,
) -> Result<GameResult, HarnessError> {
    let state = GameState::new(n, b).map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut inner = maker.build(n, b, goal)?;
    let last: LastMove = Arc::default();
    let mut mk = Watched {
        inner: inner.as_mut(),
        last: last.clone(),
    };
    let mut br = HumanBreaker {
        input,
        output,
        last,
        resigned: false,
    };
    let opts = PlayOptions {
        move_cap: None,
        seed,
        config_hash: maker.config_hash()?,
    };
    let result = play(state, &mut mk, &mut br, goal, &opts).map_err(|e| HarnessError::Config(e.to_string()))?;
    let verdict = format!(
        "\nresult: {} after {} Maker moves\n",
        result.outcome.label(),
        result.maker_moves_used
    );
    br.say(&verdict);
    Ok(result)
}
