use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fastmaker")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn box_query_succeeds() {
    let o = run(&["box", "--k", "3", "--a", "2", "--t", "9"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("f(3,2) = 9"), "{text}");
    assert!(text.contains("BoxMaker wins"), "{text}");
}

#[test]
fn simulate_writes_a_verifiable_game() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["simulate", "--maker", "pm", "--n", "40", "--b", "1", "--breaker", "random", "--seed", "3", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let jsonl: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".jsonl"))
        .collect();
    assert_eq!(jsonl.len(), 1);
    let p = jsonl[0].to_str().unwrap();
    assert_eq!(code(&run(&["verify", p])), 0);
    let o = run(&["verify", p, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verified"], serde_json::Value::Bool(true));
    assert_eq!(code(&run(&["replay", p])), 0);
    assert_eq!(code(&run(&["replay", p, "--none"])), 0);
}

#[test]
fn setup_errors_exit_2() {
    assert_eq!(code(&run(&["simulate", "--maker", "pm", "--n", "40", "--b", "1", "--breaker", "random"])), 2);
    assert_eq!(code(&run(&["simulate", "--maker", "nope", "--n", "40", "--b", "1", "--breaker", "random", "--seed", "0"])), 2);
    assert_eq!(code(&run(&["simulate", "--maker", "pm", "--set", "delt=1", "--n", "40", "--b", "1", "--breaker", "random", "--seed", "0"])), 2);
    assert_eq!(code(&run(&["replay", "/nonexistent/game.jsonl"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "maker = \"pm\"\nn = [100]\nb = [1]\nseeds = [0]\ncolour = 3\n").unwrap();
    assert_eq!(code(&run(&["sweep", cfg.to_str().unwrap()])), 2);
}

fn write_lines(dir: &Path, lines: &[&str]) -> String {
    let p = dir.join("t.jsonl");
    fs::write(&p, lines.join("\n")).unwrap();
    p.to_string_lossy().into_owned()
}

const HEADER: &str = r#"{"n":10,"b":1,"goal":"PM","maker":"pm","breaker":"x","seed":0,"config_hash":"","h":[]}"#;

#[test]
fn monitor_violation_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // Breaker piles onto vertex 0 while Maker matches elsewhere.
    let p = write_lines(
        dir.path(),
        &[
            HEADER,
            r#"{"i":0,"p":"B","e":[[0,1]],"a":{}}"#,
            r#"{"i":1,"p":"M","e":[[2,3]],"a":{"stage":1.0}}"#,
            r#"{"i":2,"p":"B","e":[[0,4]],"a":{}}"#,
            r#"{"i":3,"p":"M","e":[[5,6]],"a":{"stage":1.0}}"#,
        ],
    );
    assert_eq!(code(&run(&["replay", &p, "--monitor", "claim1"])), 1);
    assert_eq!(code(&run(&["replay", &p, "--monitor", "claim1", "--delta-pm", "0.5"])), 0);
    let o = run(&["replay", &p, "--monitor", "claim1", "--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violations"][0]["move_index"], 1);
}

#[test]
fn out_of_turn_transcript_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_lines(
        dir.path(),
        &[
            HEADER,
            r#"{"i":0,"p":"B","e":[[0,1]],"a":{}}"#,
            r#"{"i":1,"p":"B","e":[[0,2]],"a":{}}"#,
        ],
    );
    let o = run(&["replay", &p, "--monitor", "claim1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn sweep_with_bound_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("conn.toml");
    fs::write(&cfg, "maker = \"conn\"\nn = [30]\nb = [1, 2]\nseeds = [0]\nbound = \"CONN_exact\"\n").unwrap();
    let o = run(&["sweep", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("n,b,goal"));
}
