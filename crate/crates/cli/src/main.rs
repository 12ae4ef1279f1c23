use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fastmaker::boxgame;
use fastmaker::breaker::BreakerKind;
use fastmaker::engine::GoalKind;
use fastmaker::harness::interactive::interactive_play;
use fastmaker::harness::replay::{replay_file, verify_file};
use fastmaker::harness::sweep::{csv_bytes, format_stats, game_stem, run_game, write_game};
use fastmaker::harness::{
    bound_check, default_goal, run_sweep, BoundSpec, ExperimentConfig, HarnessError, MakerSpec, Preset,
};
use fastmaker::monitors::{self, Monitor, MonitorParams};
use fastmaker::transcript::Transcript;

/// Biased Maker-Breaker games on K_n.
///
/// Exit codes: 0 all checks passed, 1 bound or invariant violation,
/// 2 configuration or I/O error. Sweep workers: MB_WORKERS.
#[derive(Parser)]
#[command(name = "fastmaker", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Play one game and run the applicable monitors.
    Simulate(SimulateArgs),
    /// Run a sweep from a TOML config.
    Sweep {
        config: PathBuf,
        /// Bound to check, overriding the config (PM_upper, HC_lower, ...).
        #[arg(long)]
        bound: Option<BoundSpec>,
    },
    /// Box game queries.
    Box {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        a: u64,
        /// Total number of elements; prints who wins B(k,t,a,1).
        #[arg(long)]
        t: Option<u64>,
    },
    /// Replay a transcript and run monitors.
    Replay {
        transcript: PathBuf,
        /// Monitors to run; default: the ones applicable to the transcript.
        #[arg(long = "monitor")]
        monitors: Vec<Monitor>,
        /// Run no monitors (strict replay only).
        #[arg(long, conflicts_with = "monitors")]
        none: bool,
        #[arg(long, default_value_t = 0.1)]
        delta_pm: f64,
        #[arg(long, default_value_t = 0.999)]
        delta_hvs: f64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Play Breaker yourself against a Maker strategy.
    Play {
        #[command(flatten)]
        maker: MakerArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to save the transcript.
        #[arg(long, default_value = "game.jsonl")]
        out: PathBuf,
    },
    /// Re-check the certificates of stored transcripts.
    Verify {
        transcripts: Vec<PathBuf>,
        /// Print one JSON report per line.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct MakerArgs {
    /// conn, pm, greedy_pm, hnf, hvs, hs or mindeg.
    #[arg(long)]
    maker: String,
    /// PM, HC, CONN or MINDEG:c; defaults by maker.
    #[arg(long)]
    goal: Option<GoalKind>,
    #[arg(long, default_value = "desk")]
    preset: Preset,
    /// Config override `key=value` (TOML value; dotted keys for nested tables).
    #[arg(long = "set")]
    set: Vec<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    maker: MakerArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    b: usize,
    #[arg(long)]
    breaker: BreakerKind,
    /// Required for randomized breakers.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cap: Option<usize>,
    /// Directory for the transcript and certificate.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Fail {
    Violation(String),
    Setup(String),
}

impl From<HarnessError> for Fail {
    fn from(e: HarnessError) -> Self {
        Fail::Setup(e.to_string())
    }
}

fn setup(msg: impl Into<String>) -> Fail {
    Fail::Setup(msg.into())
}

fn maker_spec(args: &MakerArgs) -> Result<(MakerSpec, GoalKind), Fail> {
    let mut spec = MakerSpec::new(&args.maker, args.preset);
    for kv in &args.set {
        let (key, value) = kv.split_once('=').ok_or_else(|| setup(format!("--set expects key=value, got {kv:?}")))?;
        let value: toml::Value = toml::from_str::<toml::Table>(&format!("v = {value}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        let mut parts: Vec<&str> = key.trim().split('.').collect();
        let last = parts.pop().expect("split yields one part");
        let mut table = &mut spec.overrides;
        for p in parts {
            let entry = table.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
            table = entry.as_table_mut().ok_or_else(|| setup(format!("{key}: {p} is not a table")))?;
        }
        table.insert(last.to_string(), value);
    }
    let goal = match args.goal {
        Some(g) => g,
        None => default_goal(&args.maker).ok_or_else(|| setup(format!("unknown maker {:?}", args.maker)))?,
    };
    Ok((spec, goal))
}

fn simulate(a: SimulateArgs) -> Result<(), Fail> {
    let (spec, goal) = maker_spec(&a.maker)?;
    let seed = match (a.seed, a.breaker.is_randomized()) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => return Err(setup(format!("--seed is required for breaker {}", a.breaker))),
    };
    let r = run_game(&spec, goal, a.n, a.b, a.breaker, seed, a.cap)?;
    println!("outcome: {:?}", r.outcome);
    println!("maker moves: {} (smallest winning set {})", r.maker_moves_used, goal.smallest_winning_set(a.n));
    println!("stats: {}", format_stats(&r.stats));
    if let Some(dir) = &a.out {
        let stem = game_stem(&spec.name, goal, a.n, a.b, a.breaker, seed);
        let path = write_game(dir, &stem, &r)?;
        println!("transcript: {}", path.display());
    }
    let which = monitors::applicable(&r.transcript);
    let v = monitors::run(&r.transcript, &which, &MonitorParams::default()).map_err(HarnessError::from)?;
    report_violations(&which, &v)
}

fn report_violations(which: &[Monitor], v: &[monitors::Violation]) -> Result<(), Fail> {
    let names: Vec<&str> = which.iter().map(|m| m.name()).collect();
    println!("monitors: [{}], {} violations", names.join(", "), v.len());
    for x in v.iter().take(20) {
        println!("  {x}");
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(Fail::Violation(format!("{} monitor violations", v.len())))
    }
}

fn sweep(path: PathBuf, bound: Option<BoundSpec>) -> Result<(), Fail> {
    let cfg = ExperimentConfig::load(&path)?;
    let rows = run_sweep(&cfg)?;
    if cfg.csv.is_none() {
        print!("{}", String::from_utf8_lossy(&csv_bytes(&rows)?));
    } else {
        println!("{} cells written to {}", rows.len(), cfg.csv.as_ref().expect("set").display());
    }
    let mut problems = Vec::new();
    let bad_cells = rows.iter().filter(|r| r.violations > 0).count();
    if bad_cells > 0 {
        problems.push(format!("{bad_cells} cells with monitor violations"));
    }
    if let Some(spec) = bound.or(cfg.bound) {
        let rep = bound_check(&rows, spec);
        eprintln!("{rep}");
        for v in &rep.violations {
            eprintln!("  {v}");
        }
        if !rep.holds() {
            problems.push(format!("{} cells violate {spec}", rep.violations.len()));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Fail::Violation(problems.join("; ")))
    }
}

fn box_query(k: u64, a: u64, t: Option<u64>) -> Result<(), Fail> {
    let f = boxgame::potential(k, a).map_err(|e| setup(e.to_string()))?;
    let (lo, hi) = boxgame::potential_bounds(k, a);
    println!("f({k},{a}) = {f}");
    println!("(a-1) k H_k = {lo:.3}, a k H_k = {hi:.3}");
    let inside = lo <= f as f64 && f as f64 <= hi;
    println!("sandwich: {}", if inside { "holds" } else { "fails" });
    if let Some(t) = t {
        let who = if boxgame::boxmaker_wins(k, t, a) { "BoxMaker" } else { "BoxBreaker" };
        println!("B({k},{t},{a},1): {who} wins (t {} f)", if t as u128 <= f { "<=" } else { ">" });
    }
    Ok(())
}

fn replay(path: PathBuf, chosen: Vec<Monitor>, none: bool, params: MonitorParams, json: bool) -> Result<(), Fail> {
    let which = if none {
        Vec::new()
    } else if chosen.is_empty() {
        monitors::applicable(&Transcript::read(&path).map_err(HarnessError::from)?)
    } else {
        chosen
    };
    let rep = replay_file(&path, &which, &params)?;
    if json {
        println!("{}", serde_json::to_string(&rep).map_err(|e| setup(e.to_string()))?);
        return if rep.violations.is_empty() {
            Ok(())
        } else {
            Err(Fail::Violation(format!("{} monitor violations", rep.violations.len())))
        };
    }
    println!("{} records, {} Maker moves", rep.records, rep.maker_moves);
    report_violations(&which, &rep.violations)
}

fn play_cmd(maker: MakerArgs, n: usize, b: usize, seed: u64, out: PathBuf) -> Result<(), Fail> {
    let (spec, goal) = maker_spec(&maker)?;
    let r = interactive_play(n, b, &spec, goal, seed, io::BufReader::new(io::stdin()), io::stdout())?;
    r.transcript.write(&out).map_err(HarnessError::from)?;
    println!("transcript saved to {}", out.display());
    Ok(())
}

fn verify(paths: Vec<PathBuf>, json: bool) -> Result<(), Fail> {
    if paths.is_empty() {
        return Err(setup("no transcripts given"));
    }
    let mut failed = 0;
    for p in &paths {
        let rep = verify_file(p)?;
        if json {
            println!("{}", serde_json::to_string(&rep).map_err(|e| setup(e.to_string()))?);
        }
        match rep.verified {
            Some(true) if json => {}
            Some(false) if json => failed += 1,
            Some(true) => println!("{}: {} verified ({})", p.display(), rep.goal, rep.method),
            Some(false) => {
                failed += 1;
                println!("{}: {} NOT verified ({})", p.display(), rep.goal, rep.method);
            }
            None => return Err(setup(format!("{}: no certificate and too large for the exact oracle", p.display()))),
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Fail::Violation(format!("{failed} transcripts failed verification")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Simulate(a) => simulate(a),
        Cmd::Sweep { config, bound } => sweep(config, bound),
        Cmd::Box { k, a, t } => box_query(k, a, t),
        Cmd::Replay {
            transcript,
            monitors,
            none,
            delta_pm,
            delta_hvs,
            json,
        } => replay(transcript, monitors, none, MonitorParams { delta_pm, delta_hvs }, json),
        Cmd::Play { maker, n, b, seed, out } => play_cmd(maker, n, b, seed, out),
        Cmd::Verify { transcripts, json } => verify(transcripts, json),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Setup(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
