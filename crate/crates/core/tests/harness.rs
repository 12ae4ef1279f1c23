use std::fs;

use fastmaker::board::{Edge, Player};
use fastmaker::breaker::BreakerKind;
use fastmaker::engine::{GoalKind, Notes};
use fastmaker::harness::replay::{replay_file, replay_transcript, verify_file};
use fastmaker::harness::sweep::{run_game, write_game};
use fastmaker::harness::{ExperimentConfig, MakerSpec, Preset};
use fastmaker::monitors::{Monitor, MonitorParams};
use fastmaker::transcript::{MoveRecord, Transcript, TranscriptError, TranscriptHeader};

fn header(n: usize, b: usize) -> TranscriptHeader {
    TranscriptHeader {
        n,
        b,
        goal: GoalKind::PerfectMatching,
        maker: "pm".into(),
        breaker: "synthetic".into(),
        seed: 0,
        config_hash: String::new(),
        preclaimed: Vec::new(),
    }
}

fn record(index: usize, player: Player, edges: &[(usize, usize)], stage: Option<f64>) -> MoveRecord {
    let mut notes = Notes::new();
    if let Some(s) = stage {
        notes.insert("stage".into(), s);
    }
    MoveRecord::new(index, player, edges.iter().map(|&(u, v)| Edge::new(u, v)).collect(), notes)
}

#[test]
fn extra_breaker_turns_break_the_degree_invariant() {
    let mut t = Transcript::new(header(10, 1));
    t.push(record(0, Player::Breaker, &[(0, 1)], None));
    t.push(record(1, Player::Breaker, &[(0, 2)], None));
    t.push(record(2, Player::Breaker, &[(0, 3)], None));
    t.push(record(3, Player::Maker, &[(4, 5)], Some(1.0)));
    // Strict replay rejects the turn order; the monitor still reads it.
    assert!(t.replay().is_err());
    let v = fastmaker::monitors::run(&t, &[Monitor::Claim1], &MonitorParams::default()).unwrap();
    assert!(!v.is_empty());
    assert!(v.iter().all(|x| x.move_index == 3));
}

#[test]
fn duplicated_line_is_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_game(&MakerSpec::new("conn", Preset::Desk), GoalKind::Connectivity, 12, 1, BreakerKind::POOL[0], 1, None).unwrap();
    let path = write_game(dir.path(), "g", &r).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let mut doubled = lines[..3].join("\n");
    doubled.push('\n');
    doubled.push_str(&lines[2..].join("\n"));
    fs::write(&path, doubled).unwrap();
    let err = replay_file(&path, &[], &MonitorParams::default()).unwrap_err();
    assert!(err.to_string().contains("corrupt transcript"), "{err}");
    let t = Transcript::read(&path).unwrap();
    assert!(matches!(t.replay(), Err(TranscriptError::CorruptTranscript { .. })));
}

#[test]
fn reused_edge_is_corrupt() {
    let mut t = Transcript::new(header(6, 1));
    t.push(record(0, Player::Breaker, &[(0, 1)], None));
    t.push(record(1, Player::Maker, &[(0, 1)], Some(1.0)));
    assert!(matches!(t.replay(), Err(TranscriptError::CorruptTranscript { line: 3, .. })));
}

#[test]
fn no_monitors_means_no_violations() {
    let r = run_game(&MakerSpec::new("pm", Preset::Desk), GoalKind::PerfectMatching, 40, 1, BreakerKind::POOL[2], 5, None).unwrap();
    let rep = replay_transcript(&r.transcript, &[], &MonitorParams::default()).unwrap();
    assert!(rep.violations.is_empty());
    assert_eq!(rep.maker_moves, r.maker_moves_used);
}

#[test]
fn stored_games_verify() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_game(&MakerSpec::new("hnf", Preset::Desk), GoalKind::HamiltonCycle, 30, 1, BreakerKind::POOL[1], 2, None).unwrap();
    assert!(r.maker_won());
    let path = write_game(dir.path(), "h", &r).unwrap();
    let v = verify_file(&path).unwrap();
    assert_eq!(v.verified, Some(true));
}

#[test]
fn config_errors_are_reported() {
    for bad in [
        "maker = \"pm\"\nn = [100]\nb = [1]\nseeds = [0]\ncolour = 3\n",
        "maker = \"pm\"\nn = []\nb = [1]\nseeds = [0]\n",
        "maker = \"pm\"\nn = [100]\nb = [0]\nseeds = [0]\n",
        "maker = \"pm\"\nn = [100]\nb = [1]\nseeds = [0]\nbreakers = [\"nobody\"]\n",
        "maker = \"pm\"\nn = [100]\n",
    ] {
        assert!(ExperimentConfig::parse(bad).is_err(), "{bad}");
    }
    let ok = ExperimentConfig::parse("maker = \"hvs\"\nn = [1000]\nb = [\"2..3\"]\nrepetitions = 2\n").unwrap();
    assert_eq!(ok.biases(1000).unwrap(), vec![2, 3]);
    assert_eq!(ok.seeds, vec![0, 1]);
}
