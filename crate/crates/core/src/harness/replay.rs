//! Transcript replay with monitors, and certificate re-verification.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::sweep::CertificateFile;
use super::HarnessError;
use crate::engine::{verify_certificate, GoalKind};
use crate::graph::Graph;
use crate::monitors::{self, Monitor, MonitorParams, Violation};
use crate::oracle;
use crate::transcript::Transcript;

#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub records: usize,
    pub maker_moves: usize,
    pub monitors: Vec<Monitor>,
    pub violations: Vec<Violation>,
}

/// Strict replay of a transcript file, then the given monitors.
pub fn replay_file(path: &Path, which: &[Monitor], params: &MonitorParams) -> Result<ReplayReport, HarnessError> {
    let t = Transcript::read(path)?;
    replay_transcript(&t, which, params)
}

pub fn replay_transcript(t: &Transcript, which: &[Monitor], params: &MonitorParams) -> Result<ReplayReport, HarnessError> {
    let state = t.replay()?;
    let violations = monitors::run(t, which, params)?;
    Ok(ReplayReport {
        records: t.records.len(),
        maker_moves: state.maker_moves(),
        monitors: which.to_vec(),
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub goal: GoalKind,
    /// `None` when nothing could be checked.
    pub verified: Option<bool>,
    pub method: String,
}

/// `foo.jsonl` -> `foo.cert.json`.
pub fn certificate_path(transcript: &Path) -> PathBuf {
    transcript.with_extension("cert.json")
}

/// Replays the transcript and re-checks the stored certificate against the
/// final board. Boards small enough for the exact oracle are also checked
/// by it on Maker's whole graph.
pub fn verify_file(path: &Path) -> Result<VerifyReport, HarnessError> {
    let t = Transcript::read(path)?;
    let state = t.replay()?;
    let goal = t.header.goal;
    let mut report = VerifyReport {
        goal,
        verified: None,
        method: String::new(),
    };
    let mut methods = Vec::new();
    let cpath = certificate_path(path);
    if cpath.exists() {
        let text = fs::read_to_string(&cpath).map_err(|e| HarnessError::io(&cpath, e))?;
        let cert: CertificateFile =
            serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", cpath.display())))?;
        let ok = cert.goal == goal.to_string() && verify_certificate(&state, goal, &cert.edges);
        report.verified = Some(ok);
        methods.push("certificate");
    }
    match oracle::exact_goal_check(&Graph::maker_graph(&state), goal) {
        Ok(ok) => {
            report.verified = Some(report.verified.unwrap_or(true) && ok);
            methods.push("exact oracle");
        }
        Err(oracle::OracleError::InstanceTooLarge { .. }) => {}
    }
    report.method = methods.join(" + ");
    Ok(report)
}
