//! JSON-lines transcripts: one header object, then one object per turn
//! (`{"i":..,"p":"M"|"B","e":[[u,v],..],"a":{..}}`).

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Edge, GameState, Player};
use crate::engine::{GoalKind, Notes};

mod goal_code {
    use super::GoalKind;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &GoalKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&g.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GoalKind, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptHeader {
    pub n: usize,
    pub b: usize,
    #[serde(with = "goal_code")]
    pub goal: GoalKind,
    pub maker: String,
    pub breaker: String,
    pub seed: u64,
    pub config_hash: String,
    /// Edges handed to Breaker before the first move.
    #[serde(rename = "h", default)]
    pub preclaimed: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveRecord {
    #[serde(rename = "i")]
    pub index: usize,
    #[serde(rename = "p")]
    pub player: Player,
    #[serde(rename = "e")]
    pub edges: Vec<Edge>,
    #[serde(rename = "a", default)]
    pub annotations: Notes,
}

impl MoveRecord {
    pub fn new(index: usize, player: Player, edges: Vec<Edge>, annotations: Notes) -> Self {
        MoveRecord {
            index,
            player,
            edges,
            annotations,
        }
    }

    pub fn note(&self, key: &str) -> Option<f64> {
        self.annotations.get(key).copied()
    }

    pub fn stage(&self) -> Option<u32> {
        self.note("stage").map(|s| s as u32)
    }
}

#[derive(Debug, Error)]
pub enum TranscriptError {
    #[error("corrupt transcript at line {line}: {reason}")]
    CorruptTranscript { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn corrupt(line: usize, reason: impl ToString) -> TranscriptError {
    TranscriptError::CorruptTranscript {
        line,
        reason: reason.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub header: TranscriptHeader,
    pub records: Vec<MoveRecord>,
}

impl Transcript {
    pub fn new(header: TranscriptHeader) -> Self {
        Transcript {
            header,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: MoveRecord) {
        self.records.push(record);
    }

    pub fn maker_records(&self) -> impl Iterator<Item = &MoveRecord> {
        self.records.iter().filter(|r| r.player == Player::Maker)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn parse_jsonl(text: &str) -> Result<Self, TranscriptError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| corrupt(1, "empty transcript"))?;
        let header: TranscriptHeader =
            serde_json::from_str(first).map_err(|e| corrupt(1, format!("bad header: {e}")))?;
        let mut records = Vec::new();
        for (i, line) in lines {
            let rec: MoveRecord =
                serde_json::from_str(line).map_err(|e| corrupt(i + 1, format!("bad record: {e}")))?;
            records.push(rec);
        }
        Ok(Transcript { header, records })
    }

    pub fn write(&self, path: &Path) -> Result<(), TranscriptError> {
        fs::write(path, self.to_jsonl())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, TranscriptError> {
        Transcript::parse_jsonl(&fs::read_to_string(path)?)
    }

    /// Fresh board for this transcript, with the forbidden graph pre-claimed.
    pub fn initial_state(&self) -> Result<GameState, TranscriptError> {
        let mut s = GameState::new(self.header.n, self.header.b)
            .map_err(|e| corrupt(1, format!("header: {e}")))?;
        s.preclaim_breaker(&self.header.preclaimed)
            .map_err(|e| corrupt(1, format!("header: {e}")))?;
        Ok(s)
    }

    /// Re-executes every record through the board. With `lenient` set,
    /// turn order and arity are not enforced (edge freeness still is).
    /// `visit` sees the initial board (`None`) and the board after each
    /// record.
    pub fn replay_visit(
        &self,
        lenient: bool,
        mut visit: impl FnMut(&GameState, Option<&MoveRecord>),
    ) -> Result<GameState, TranscriptError> {
        let mut state = self.initial_state()?;
        visit(&state, None);
        for (k, rec) in self.records.iter().enumerate() {
            let line = k + 2;
            if rec.index != k {
                return Err(corrupt(line, format!("record index {} != {k}", rec.index)));
            }
            let res = if rec.edges.is_empty() && rec.note("pass").is_some() {
                if lenient {
                    state.force_claim(rec.player, &[])
                } else {
                    state.pass(rec.player)
                }
            } else if lenient {
                state.force_claim(rec.player, &rec.edges)
            } else {
                state.claim(rec.player, &rec.edges)
            };
            res.map_err(|e| corrupt(line, e))?;
            visit(&state, Some(rec));
        }
        Ok(state)
    }

    pub fn replay(&self) -> Result<GameState, TranscriptError> {
        self.replay_visit(false, |_, _| {})
    }
}
