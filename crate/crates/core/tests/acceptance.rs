//! Acceptance run. Prints one PASS/FAIL line per criterion, then a summary.
//! Pass criterion numbers as arguments to run a subset.
//!
//! The process exits 0 even when a criterion fails: a red line is a result
//! to read, not a broken build.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fastmaker::board::{Edge, GameState, Player};
use fastmaker::boxgame;
use fastmaker::breaker::{BreakerKind, CliqueMode};
use fastmaker::degree_game;
use fastmaker::engine::{play, verify_certificate, GameResult, GoalKind, PlayOptions};
use fastmaker::graph::Graph;
use fastmaker::harness::sweep::run_game;
use fastmaker::harness::{bound_check, run_sweep, BoundSpec, ExperimentConfig, MakerSpec, Preset};
use fastmaker::maker::lemma10::lemma10_pair;
use fastmaker::maker::posa;
use fastmaker::monitors::{self, Monitor, MonitorParams};
use fastmaker::oracle;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn pool() -> Vec<BreakerKind> {
    BreakerKind::POOL.to_vec()
}

/// Independent Hamilton cycle test: `cert` has `n` Maker edges, every
/// vertex has degree 2 and the edges form one connected cycle.
fn is_hamilton_cycle(state: &GameState, cert: &[Edge]) -> bool {
    let n = state.n();
    if cert.len() != n || cert.iter().any(|&e| !state.is_maker(e)) {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for e in cert {
        let (u, v) = e.endpoints();
        adj[u].push(v);
        adj[v].push(u);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut steps) = (0usize, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        steps += 1;
        if steps > n {
            return false;
        }
    }
    steps == n
}

// ---------------------------------------------------------------- 1

/// BoxMaker to move after BoxBreaker, or BoxBreaker to move; `needs` are
/// the unfilled element counts of the surviving boxes, sorted.
fn box_value(needs: &[u64], a: u64, breaker_turn: bool, memo: &mut HashMap<(Vec<u64>, bool), bool>) -> bool {
    if needs.first() == Some(&0) {
        return true;
    }
    if needs.is_empty() {
        return false;
    }
    if let Some(&v) = memo.get(&(needs.to_vec(), breaker_turn)) {
        return v;
    }
    let v = if breaker_turn {
        let mut seen = HashSet::new();
        (0..needs.len()).filter(|&i| seen.insert(needs[i])).all(|i| {
            let mut rest = needs.to_vec();
            rest.remove(i);
            box_value(&rest, a, false, memo)
        })
    } else {
        let total: u64 = needs.iter().sum();
        let mut found = false;
        let mut alloc = vec![0u64; needs.len()];
        spread(needs, a.min(total), 0, &mut alloc, &mut |alloc| {
            if !found {
                let mut next: Vec<u64> = needs.iter().zip(alloc).map(|(n, c)| n - c).collect();
                next.sort_unstable();
                found = box_value(&next, a, true, memo);
            }
        });
        found
    };
    memo.insert((needs.to_vec(), breaker_turn), v);
    v
}

fn spread(needs: &[u64], left: u64, i: usize, alloc: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if i == needs.len() {
        if left == 0 {
            f(alloc);
        }
        return;
    }
    for c in 0..=left.min(needs[i]) {
        alloc[i] = c;
        spread(needs, left - c, i + 1, alloc, f);
    }
    alloc[i] = 0;
}

fn criterion_1() -> Verdict {
    let mut mismatches = 0;
    let mut sandwich_lower = 0;
    let mut sandwich_upper = 0;
    for a in 1..=100u64 {
        let table = boxgame::potential_table(10_000, a).expect("valid");
        let mut f: u128 = 0;
        let mut h = 1.0f64;
        for k in 1..=10_000u64 {
            if k > 1 {
                f = (k as u128 * (f + a as u128)) / (k as u128 - 1);
                h += 1.0 / k as f64;
            }
            if table[k as usize - 1] != f {
                mismatches += 1;
            }
            let (lo, hi) = ((a - 1) as f64 * k as f64 * h, a as f64 * k as f64 * h);
            let fv = f as f64;
            if fv < lo * (1.0 - 1e-12) {
                sandwich_lower += 1;
            }
            if fv > hi * (1.0 + 1e-12) {
                sandwich_upper += 1;
            }
        }
    }
    let mut game_mismatch = Vec::new();
    let mut cases = 0;
    for k in 1..=4u64 {
        for a in 1..=3u64 {
            let mut memo = HashMap::new();
            for t in 0..=12u64 {
                let mut needs: Vec<u64> = (0..k).map(|i| t / k + u64::from(i < t % k)).collect();
                needs.sort_unstable();
                cases += 1;
                if box_value(&needs, a, true, &mut memo) != boxgame::boxmaker_wins(k, t, a) {
                    game_mismatch.push((k, t, a));
                }
            }
        }
    }
    let pass = mismatches == 0 && sandwich_lower == 0 && sandwich_upper == 0 && game_mismatch.is_empty();
    verdict(
        pass,
        format!(
            "recursion mismatches {mismatches}; sandwich violations lower {sandwich_lower}, upper {sandwich_upper} \
             (k<=10^4, a<=100); minimax disagreements {}/{cases} {:?}",
            game_mismatch.len(),
            game_mismatch
        ),
    )
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Verdict {
    let cfg = ExperimentConfig::new(
        MakerSpec::new("conn", Preset::Desk),
        GoalKind::Connectivity,
        vec![20, 50, 100, 200, 300, 400, 500],
        (1..=5).collect(),
        pool(),
        (0..10).collect(),
    );
    let rows = run_sweep(&cfg).expect("sweep");
    let rep = bound_check(&rows, BoundSpec::ConnExact);
    verdict(rep.holds(), format!("{rep}; first: {:?}", rep.violations.first().map(|v| v.to_string()).unwrap_or_default()))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Verdict {
    let mut cfg = ExperimentConfig::parse(
        "maker = \"pm\"\nn = [100, 200, 300, 400, 500, 600, 700, 800, 900, 1000]\nb = [\"1..pm_limit\"]\nseeds = [0, 1, 2]\n",
    )
    .expect("config");
    cfg.monitors = true;
    let biases: Vec<usize> = cfg.n.iter().flat_map(|&n| cfg.biases(n).expect("bias")).collect::<HashSet<_>>().into_iter().collect();
    let rows = run_sweep(&cfg).expect("sweep");
    let lost: Vec<_> = rows.iter().filter(|r| !r.maker_won()).map(|r| format!("n={} b={} {}", r.n, r.b, r.breaker)).collect();
    let viol: usize = rows.iter().map(|r| r.violations).sum();
    let rep = bound_check(&rows, BoundSpec::PmUpper);
    verdict(
        lost.is_empty() && viol == 0,
        format!(
            "{} games, biases {:?}, losses {} {:?}, claim1 violations {viol}; {rep}",
            rows.len(),
            biases,
            lost.len(),
            lost.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Verdict {
    let makers: [(&str, GoalKind, CliqueMode); 5] = [
        ("pm", GoalKind::PerfectMatching, CliqueMode::Pm),
        ("greedy_pm", GoalKind::PerfectMatching, CliqueMode::Pm),
        ("hnf", GoalKind::HamiltonCycle, CliqueMode::Hc),
        ("hvs", GoalKind::HamiltonCycle, CliqueMode::Hc),
        ("hs", GoalKind::HamiltonCycle, CliqueMode::Hc),
    ];
    let mut checked = 0;
    let mut wins = 0;
    let mut bad = Vec::new();
    let mut clique_viol = 0;
    let mut touched = Vec::new();
    for (name, goal, mode) in makers {
        let mut spec = MakerSpec::new(name, Preset::Desk);
        if name == "pm" {
            spec.overrides.insert("enforce_bias_limit".into(), false.into());
        }
        for n in [200usize, 500] {
            for b in [8usize, 16, 32] {
                checked += 1;
                let r = match run_game(&spec, goal, n, b, BreakerKind::Clique(mode), 0, None) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                clique_viol += monitors::run(&r.transcript, &[Monitor::Clique], &MonitorParams::default()).expect("replay").len();
                if mode == CliqueMode::Pm && name == "pm" {
                    let at = monitors::touched_at_size(&r.transcript, b / 2);
                    touched.push(format!("n={n},b={b}:{at:?}/{:.1}", (13.0 * b as f64 - 76.0) / 12.0));
                }
                if !r.maker_won() {
                    continue;
                }
                wins += 1;
                let m = r.maker_moves_used;
                let ok = match goal {
                    GoalKind::PerfectMatching => 4 * m >= 2 * n + b,
                    _ => 2 * m >= 2 * n + b,
                };
                if !ok {
                    bad.push(format!("{name} n={n} b={b}: {m}"));
                }
            }
        }
    }
    verdict(
        bad.is_empty() && clique_viol == 0,
        format!(
            "{checked} games, {wins} Maker wins checked against n/2+b/4 (PM) and n+b/2 (HC); violations {} {:?}; \
             clique monitor violations {clique_viol}; pm touched-at-b/2 vs (13b-76)/12: {}",
            bad.len(),
            bad,
            touched.join(" ")
        ),
    )
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Verdict {
    let spec = MakerSpec::new("hvs", Preset::Desk);
    let which = [Monitor::Claim2, Monitor::Claim3, Monitor::Stage1Caps, Monitor::Phase];
    let mut games = 0;
    let mut fails = Vec::new();
    let mut max_excess = 0i64;
    for n in [1000usize, 4000] {
        for b in [2usize, 3] {
            for br in pool() {
                for seed in [0u64, 1] {
                    games += 1;
                    let r = run_game(&spec, GoalKind::HamiltonCycle, n, b, br, seed, None).expect("game");
                    let tag = format!("n={n} b={b} {br} s{seed}");
                    if !r.maker_won() {
                        fails.push(format!("{tag}: {:?}", r.outcome));
                        continue;
                    }
                    max_excess = max_excess.max(r.maker_moves_used as i64 - n as i64);
                    let cert = r.certificate.as_deref().unwrap_or(&[]);
                    if !is_hamilton_cycle(&r.final_state, cert) {
                        fails.push(format!("{tag}: certificate rejected"));
                    }
                    let v = monitors::run(&r.transcript, &which, &MonitorParams::default()).expect("replay");
                    if let Some(x) = v.first() {
                        fails.push(format!("{tag}: {} violations, first {x}", v.len()));
                    }
                }
            }
        }
    }
    verdict(
        fails.is_empty(),
        format!("{games} games, max excess over n {max_excess}; failures {} {:?}", fails.len(), fails),
    )
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Verdict {
    let spec = MakerSpec::new("hs", Preset::Desk);
    let mut games = 0;
    let mut fails = Vec::new();
    let mut box_margin = f64::INFINITY;
    for n in [1000usize, 3000] {
        for b in [1usize, 2] {
            for br in pool() {
                for seed in [0u64, 1] {
                    games += 1;
                    let r = run_game(&spec, GoalKind::HamiltonCycle, n, b, br, seed, None).expect("game");
                    let tag = format!("n={n} b={b} {br} s{seed}");
                    let v = monitors::run(&r.transcript, &[Monitor::EndCap], &MonitorParams::default()).expect("replay");
                    if let Some(x) = v.first() {
                        fails.push(format!("{tag}: end cap {x}"));
                    }
                    if !r.maker_won() {
                        fails.push(format!("{tag}: {:?}", r.outcome));
                        continue;
                    }
                    let cert = r.certificate.as_deref().unwrap_or(&[]);
                    if !is_hamilton_cycle(&r.final_state, cert) {
                        fails.push(format!("{tag}: certificate rejected"));
                    }
                    match (r.stats.get("box_load"), r.stats.get("box_size")) {
                        (Some(&load), Some(&size)) => {
                            box_margin = box_margin.min(size - load);
                            if load >= size {
                                fails.push(format!("{tag}: b H_2L = {load:.2} >= box size {size}"));
                            }
                        }
                        _ => fails.push(format!("{tag}: no box accounting")),
                    }
                }
            }
        }
    }
    // Downscaled instance: one expander of order 8, certificate checked by
    // the exact oracle as well.
    let mut small = MakerSpec::new("hs", Preset::Desk);
    small.overrides = toml::from_str("order = 8\nmax_expanders = 1\n[hamconn]\nmin_degree = 3\n").expect("toml");
    let r = run_game(&small, GoalKind::HamiltonCycle, 24, 1, BreakerKind::POOL[0], 0, None).expect("smoke");
    let smoke = r.maker_won()
        && is_hamilton_cycle(&r.final_state, r.certificate.as_deref().unwrap_or(&[]))
        && oracle::exact_goal_check(&Graph::maker_graph(&r.final_state), GoalKind::HamiltonCycle) == Ok(true);
    if !smoke {
        fails.push(format!("n=24 smoke: {:?}", r.outcome));
    }
    verdict(
        fails.is_empty(),
        format!(
            "{games} games + n=24 smoke ({}); min box margin {box_margin:.2}; failures {} {:?}",
            if smoke { "exact oracle confirms" } else { "failed" },
            fails.len(),
            fails
        ),
    )
}

// ---------------------------------------------------------------- 7

/// Random forbidden graph: edges with probability `p`, then edges at
/// vertices of degree above `max_deg` dropped.
fn forbidden_graph(n: usize, p: f64, max_deg: usize, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    let mut deg = vec![0usize; n];
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) && deg[u] < max_deg && deg[v] < max_deg {
                deg[u] += 1;
                deg[v] += 1;
                out.push(Edge::new(u, v));
            }
        }
    }
    out
}

fn criterion_7() -> Verdict {
    let spec = MakerSpec::new("hnf", Preset::Desk);
    let mut games = 0;
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [60usize, 100, 150, 200] {
        for b in 1..=3usize {
            for br in pool() {
                games += 1;
                let h = forbidden_graph(n, 0.05, n / 10, &mut rng);
                let mut state = GameState::new(n, b).expect("board");
                state.preclaim_breaker(&h).expect("fresh");
                let mut mk = spec.build(n, b, GoalKind::HamiltonCycle).expect("maker");
                let mut bk = br.build(b, n as u64);
                let opts = PlayOptions { move_cap: Some(14 * n), seed: n as u64, config_hash: String::new() };
                let r: GameResult = play(state, mk.as_mut(), bk.as_mut(), GoalKind::HamiltonCycle, &opts).expect("game");
                let tag = format!("n={n} b={b} {br} |H|={}", h.len());
                if !r.maker_won() {
                    fails.push(format!("{tag}: {:?}", r.outcome));
                    continue;
                }
                worst = worst.max(r.maker_moves_used as f64 / n as f64);
                if !is_hamilton_cycle(&r.final_state, r.certificate.as_deref().unwrap_or(&[])) {
                    fails.push(format!("{tag}: certificate rejected"));
                }
            }
        }
    }
    // Boosters from rotations against exhaustive enumeration.
    let mut graphs = 0;
    let mut disagreements = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    while graphs < 300 {
        let n = rng.gen_range(5..=12);
        let p = rng.gen_range(0.2..0.6);
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        if !g.is_connected() {
            continue;
        }
        graphs += 1;
        let all = oracle::enumerate_boosters(&g, |_| true);
        let hamiltonian = oracle::has_hamilton_cycle(&g);
        let rot_ok = posa::rotation_boosters(&g).iter().all(|e| all.contains(e));
        let found = posa::find_booster(&g, |_, _| true, None);
        let ok = match found {
            Ok(e) => !hamiltonian && all.contains(&e),
            Err(posa::BoosterError::AlreadyHamiltonian) => hamiltonian,
            Err(_) => !hamiltonian && all.is_empty(),
        };
        if !(rot_ok && ok) {
            disagreements += 1;
        }
    }
    verdict(
        fails.is_empty() && disagreements == 0,
        format!(
            "{games} games on K_n minus H, worst moves/n {worst:.2} (cap 14); failures {} {:?}; \
             booster disagreements {disagreements}/{graphs}",
            fails.len(),
            fails
        ),
    )
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Verdict {
    let mut games = 0;
    let mut fails = Vec::new();
    let mut skipped = Vec::new();
    for n in [100usize, 500] {
        for c in [1usize, 2, 12] {
            let Some(bmax) = degree_game::max_bias(n, c) else {
                skipped.push(format!("n={n} c={c}"));
                continue;
            };
            let mut cfg = ExperimentConfig::new(
                MakerSpec::new("mindeg", Preset::Desk),
                GoalKind::MinDegree(c),
                vec![n],
                (1..=bmax).collect(),
                pool(),
                vec![0],
            );
            cfg.move_cap = Some(c * n);
            for r in run_sweep(&cfg).expect("sweep") {
                games += 1;
                if !r.maker_won() || r.maker_moves > c * n || r.violations > 0 {
                    fails.push(format!("n={n} c={c} b={} {}: {} in {} moves, {} danger violations", r.b, r.breaker, r.winner, r.maker_moves, r.violations));
                }
            }
        }
    }
    verdict(
        fails.is_empty(),
        format!(
            "{games} games; no bias meets the preconditions for {:?}; failures {} {:?}",
            skipped,
            fails.len(),
            fails.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

// ---------------------------------------------------------------- 9

fn brute_matching(g: &Graph, used: &mut Vec<bool>, out: &mut Vec<Edge>) -> bool {
    let Some(u) = (0..g.n()).find(|&v| !used[v]) else { return true };
    used[u] = true;
    for v in u + 1..g.n() {
        if !used[v] && g.has_edge(u, v) {
            used[v] = true;
            out.push(Edge::new(u, v));
            if brute_matching(g, used, out) {
                return true;
            }
            out.pop();
            used[v] = false;
        }
    }
    used[u] = false;
    false
}

fn brute_cycle(g: &Graph, path: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    let n = g.n();
    let last = *path.last().expect("starts at 0");
    if path.len() == n {
        return g.has_edge(last, 0);
    }
    for v in 1..n {
        if !used[v] && g.has_edge(last, v) {
            used[v] = true;
            path.push(v);
            if brute_cycle(g, path, used) {
                return true;
            }
            path.pop();
            used[v] = false;
        }
    }
    false
}

fn brute_tree(g: &Graph) -> Option<Vec<Edge>> {
    let n = g.n();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut out = Vec::new();
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if !seen[v] && g.has_edge(u, v) {
                seen[v] = true;
                out.push(Edge::new(u, v));
                stack.push(v);
            }
        }
    }
    (out.len() + 1 == n).then_some(out)
}

fn brute_certificate(g: &Graph, goal: GoalKind) -> Option<Vec<Edge>> {
    let n = g.n();
    match goal {
        GoalKind::PerfectMatching => {
            let mut out = Vec::new();
            (n % 2 == 0 && brute_matching(g, &mut vec![false; n], &mut out)).then_some(out)
        }
        GoalKind::HamiltonCycle => {
            let mut used = vec![false; n];
            used[0] = true;
            let mut path = vec![0];
            (n >= 3 && brute_cycle(g, &mut path, &mut used)).then(|| {
                let mut e: Vec<Edge> = path.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
                e.push(Edge::new(path[n - 1], 0));
                e
            })
        }
        GoalKind::Connectivity => brute_tree(g),
        GoalKind::MinDegree(_) => None,
    }
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut positions = 0;
    let mut disagreements = Vec::new();
    for n in 4..=8usize {
        for _ in 0..200 {
            let b = rng.gen_range(1..=2);
            let mut s = GameState::new(n, b).expect("board");
            let mut free: Vec<Edge> = s.free_edges().collect();
            let mut turn = Player::Breaker;
            while !free.is_empty() {
                let k = if turn == Player::Maker { 1 } else { b.min(free.len()) };
                let mut take = Vec::new();
                for _ in 0..k {
                    take.push(free.swap_remove(rng.gen_range(0..free.len())));
                }
                s.claim(turn, &take).expect("free");
                turn = turn.opponent();
                let g = Graph::maker_graph(&s);
                for goal in [GoalKind::PerfectMatching, GoalKind::HamiltonCycle, GoalKind::Connectivity] {
                    positions += 1;
                    let exact = oracle::exact_goal_check(&g, goal).expect("small");
                    let cert = brute_certificate(&g, goal);
                    let mut ok = exact == cert.is_some();
                    if let Some(c) = &cert {
                        ok &= verify_certificate(&s, goal, c);
                        // A certificate with one edge replaced by a non-Maker pair fails.
                        if let Some(x) = s.free_edges().next().or_else(|| s.breaker_edges().first().copied()) {
                            let mut bad = c.clone();
                            bad[0] = x;
                            ok &= !verify_certificate(&s, goal, &bad);
                        }
                    }
                    if !ok && disagreements.len() < 5 {
                        disagreements.push(format!("n={n} {goal} exact={exact} brute={}", cert.is_some()));
                    }
                }
            }
        }
    }
    // Exhaustive over all graphs on at most 6 vertices.
    let mut graphs = 0;
    let mut lemma_fail = Vec::new();
    for n in 2..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let mut g = Graph::new(n);
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
            let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
            let total: usize = deg.iter().sum();
            // D < n - 1 is `total < n (n - 1)`.
            if total >= n * (n - 1) {
                continue;
            }
            graphs += 1;
            let set: Vec<usize> = (0..n).collect();
            let exists = pairs.iter().any(|&(u, v)| !g.has_edge(u, v) && (deg[u] + deg[v]) * n >= total);
            let good = match lemma10_pair(&g, &set) {
                Ok((x, y)) => x != y && !g.has_edge(x, y) && (deg[x] + deg[y]) * n >= total,
                Err(_) => false,
            };
            if !(exists && good) && lemma_fail.len() < 5 {
                lemma_fail.push(format!("n={n} mask={mask:#x}"));
            }
        }
    }
    verdict(
        disagreements.is_empty() && lemma_fail.is_empty(),
        format!(
            "{positions} positions (4<=n<=8, 200 playouts each): disagreements {:?}; lemma pair on {graphs} graphs: failures {:?}",
            disagreements, lemma_fail
        ),
    )
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().expect("tempdir");
    let run = |tag: &str, workers: Option<&str>| -> (Vec<u8>, Vec<(String, Vec<u8>)>) {
        let out = dir.path().join(tag);
        let text = format!(
            "maker = \"pm\"\nn = [60, 100]\nb = [1]\nbreakers = [\"pool\", \"clique_pm\"]\nseeds = [3, 4]\n\
             csv = \"{}\"\ntranscripts = \"{}\"\n",
            out.join("rows.csv").display(),
            out.join("t").display()
        );
        match workers {
            Some(w) => std::env::set_var(fastmaker::harness::WORKERS_ENV, w),
            None => std::env::remove_var(fastmaker::harness::WORKERS_ENV),
        }
        run_sweep(&ExperimentConfig::parse(&text).expect("config")).expect("sweep");
        let csv = fs::read(out.join("rows.csv")).expect("csv");
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(out.join("t"))
            .expect("dir")
            .map(|e| {
                let p = e.expect("entry").path();
                (p.file_name().expect("name").to_string_lossy().into_owned(), fs::read(&p).expect("read"))
            })
            .collect();
        files.sort();
        (csv, files)
    };
    let a = run("a", None);
    let b = run("b", Some("1"));
    let c = run("c", Some("3"));
    std::env::remove_var(fastmaker::harness::WORKERS_ENV);
    let same = a == b && b == c;
    verdict(
        same && !a.1.is_empty(),
        format!("3 runs (default, 1 and 3 workers): CSV {} bytes, {} transcript files, identical: {same}", a.0.len(), a.1.len()),
    )
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Verdict); 10] = [
        (1, "box game exactness", Duration::from_secs(60), criterion_1),
        (2, "connectivity in n-1", Duration::from_secs(60), criterion_2),
        (3, "perfect matching upper bound", Duration::from_secs(600), criterion_3),
        (4, "delay lower bounds", Duration::from_secs(300), criterion_4),
        (5, "small-bias Hamilton strategy", Duration::from_secs(900), criterion_5),
        (6, "expander Hamilton strategy", Duration::from_secs(900), criterion_6),
        (7, "Hamilton strategy on K_n minus H", Duration::from_secs(600), criterion_7),
        (8, "degree game", Duration::from_secs(300), criterion_8),
        (9, "oracle equivalence", Duration::from_secs(120), criterion_9),
        (10, "determinism", Duration::from_secs(600), criterion_10),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut passed = 0;
    let mut ran = 0;
    for (id, name, limit, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        ran += 1;
        let t = Instant::now();
        let v = run();
        let took = t.elapsed();
        let pass = v.pass && took <= limit;
        passed += usize::from(pass);
        println!(
            "{} criterion {id} ({name}): {} [{:.1}s / limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {passed}/{ran} criteria pass");
}
