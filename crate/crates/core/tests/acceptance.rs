//! Acceptance gate. Runs every criterion in sequence, prints one PASS/FAIL
//! line each and exits non-zero if any failed.

mod common;

use std::collections::HashSet;
use std::net::TcpListener;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use graph_puzzles::env::oracle_policy;
use graph_puzzles::eval::{
    build_suite, evaluate_seeds, iqm, iqm_ci, iqm_ci_stratified, suite_sizes, Agent, EvalReport, NoopAgent,
    OracleAgent, TestSuite,
};
use graph_puzzles::generate::{count_distinct, generate, training_size};
use graph_puzzles::graph::{encode, one_hot_group, topology, TopologySpec};
use graph_puzzles::instance::{write_corpus, Clues, Layout};
use graph_puzzles::protocol::{serve_listener, Client, RemoteBackend, ServerConfig};
use graph_puzzles::rules::{self, PuzzleState};
use graph_puzzles::solver::{solve, Verdict};
use graph_puzzles::{Env, EnvConfig, GridSpec, PuzzleKind, RewardMode};
use rand::Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn uniqueness() -> Outcome {
    let start = Instant::now();
    let expected = [
        (PuzzleKind::Tents, 5),
        (PuzzleKind::Lightup, 6),
        (PuzzleKind::Mosaic, 4),
        (PuzzleKind::Loopy, 4),
        (PuzzleKind::Net, 4),
        (PuzzleKind::Unruly, 6),
    ];
    let mut checked = 0;
    for (kind, n) in expected {
        let g = training_size(kind);
        ensure(g == GridSpec::square(n), || format!("{kind} trains at {g}, expected {n}x{n}"))?;
        for seed in 0..100 {
            let inst = generate(kind, g, seed).map_err(e2s)?;
            let r = solve(&inst.layout, 2).map_err(e2s)?;
            ensure(r.verdict == Verdict::Unique, || format!("{kind} seed {seed}: {:?}", r.verdict))?;
            ensure(r.solutions[0] == inst.solution, || format!("{kind} seed {seed}: solver disagrees with stored solution"))?;
            checked += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(600), || format!("took {t:?}"))?;
    Ok(format!("{checked}/600 unique in {:.1}s", t.as_secs_f64()))
}

fn distinct_configs() -> Outcome {
    let start = Instant::now();
    let net = count_distinct(PuzzleKind::Net, GridSpec::square(3), 500_000).map_err(e2s)?;
    let loopy = count_distinct(PuzzleKind::Loopy, GridSpec::square(3), 500_000).map_err(e2s)?;
    let t = start.elapsed();
    let detail = format!("net 3x3 {net} (need 176), loopy 3x3 {loopy} (need 458), {:.1}s", t.as_secs_f64());
    ensure(net >= 176 && loopy >= 458 && t < Duration::from_secs(900), || detail.clone())?;
    Ok(detail)
}

fn reward_properties() -> Outcome {
    let mut episodes = 0;
    let mut solved = 0;
    for kind in PuzzleKind::ALL {
        let g = training_size(kind);
        for ep in 0..1000u64 {
            let inst = generate(kind, g, 10_000 + ep).map_err(e2s)?;
            let mut envs = Vec::new();
            for mode in RewardMode::ALL {
                let mut env = Env::new(EnvConfig::new(kind, g).reward_mode(mode)).map_err(e2s)?;
                env.reset_with(inst.clone()).map_err(e2s)?;
                envs.push((mode, env, 0.0f64, 0usize));
            }
            // mix of pure noise and noisy progress towards the solution
            let p = [0.0, 0.3, 0.7, 0.95][ep as usize % 4];
            let mut r = rng(ep ^ (kind as u64) << 32);
            let s0 = envs[0].1.state().unwrap().clone();
            let (f0, _) = naive_violations(s0.layout(), s0.values());
            let q0 = naive_quality(s0.values(), &inst.solution, None);
            let m0 = naive_quality(s0.values(), &inst.solution, Some(&f0));
            let (mut q_best, mut m_best) = (q0, m0);
            let mut done = false;
            let mut end_solved = false;
            while !done {
                let state = envs[0].1.state().unwrap().clone();
                let actions: Vec<u8> = oracle_policy(&state, &inst)
                    .into_iter()
                    .map(|a| if r.gen_bool(p) { a } else { r.gen_range(0..kind.num_actions()) as u8 })
                    .collect();
                let mut dones = Vec::new();
                for (mode, env, ret, nonzero) in envs.iter_mut() {
                    let out = env.step(&actions).map_err(e2s)?;
                    ensure(out.reward >= 0.0, || format!("{kind} {mode}: negative reward {}", out.reward))?;
                    let s = env.state().unwrap();
                    let (flags, _) = naive_violations(s.layout(), s.values());
                    let q = naive_quality(s.values(), &inst.solution, None);
                    let m = naive_quality(s.values(), &inst.solution, Some(&flags));
                    ensure(m <= q, || format!("{kind}: masked quality {m} above quality {q}"))?;
                    ensure(out.info.quality == q && out.info.masked_quality == m, || {
                        format!("{kind}: reported qualities {:?} vs {q}/{m}", out.info)
                    })?;
                    *ret += out.reward;
                    *nonzero += usize::from(out.reward != 0.0);
                    dones.push((out.done, out.info.solved));
                    if *mode == RewardMode::Iterative {
                        q_best = q_best.max(q);
                        m_best = m_best.max(m);
                    }
                }
                ensure(dones.iter().all(|d| *d == dones[0]), || format!("{kind}: modes disagree on termination"))?;
                (done, end_solved) = dones[0];
            }
            for (mode, _, ret, nonzero) in &envs {
                match mode {
                    RewardMode::Iterative => ensure(*ret == (q_best - q0) as f64, || {
                        format!("{kind} ep {ep}: iterative return {ret} != {}", q_best - q0)
                    })?,
                    RewardMode::Partial => ensure(*ret == (m_best - m0) as f64, || {
                        format!("{kind} ep {ep}: partial return {ret} != {}", m_best - m0)
                    })?,
                    RewardMode::Sparse => ensure(*nonzero == usize::from(end_solved), || {
                        format!("{kind} ep {ep}: sparse gave {nonzero} nonzero rewards, solved {end_solved}")
                    })?,
                }
            }
            episodes += 1;
            solved += usize::from(end_solved);
        }
    }
    Ok(format!("{episodes} episodes x 3 modes ({solved} solved), zero violations"))
}

fn violation_oracle() -> Outcome {
    let mut states = 0;
    for kind in PuzzleKind::ALL {
        let mut r = rng(77 + kind as u64);
        for k in 0..10_000 {
            let (mut w, mut h) = (r.gen_range(2..=8), r.gen_range(2..=8));
            if kind == PuzzleKind::Unruly {
                (w, h) = (w & !1, h & !1);
            }
            let layout = random_layout(kind, GridSpec::new(w, h), &mut r);
            let values = random_values(&layout, &mut r);
            let state = PuzzleState::new(layout.clone(), values.clone()).map_err(e2s)?;
            let (dec, meta) = naive_violations(&layout, &values);
            ensure(state.violations().decision == dec && state.violations().meta == meta, || {
                format!("{kind} state {k} ({w}x{h}) values {values:?}: engine {:?} naive {:?}", state.violations(), (dec, meta))
            })?;
            if kind == PuzzleKind::Lightup {
                ensure(rules::lightup::lit(&layout, &values) == naive_lit(&layout, &values), || {
                    format!("lightup state {k}: lit cells differ")
                })?;
            }
            states += 1;
        }
    }
    Ok(format!("{states} random states, flags identical"))
}

/// Directed edges counted by brute force over node pairs.
fn brute_edge_count(kind: PuzzleKind, grid: GridSpec) -> (usize, usize, usize) {
    let (w, h) = (grid.width, grid.height);
    let cells = w * h;
    match kind {
        PuzzleKind::Loopy => {
            let n = 2 * cells + w + h;
            let ends: Vec<_> = (0..n).map(|e| loopy_endpoints(w, h, e)).collect();
            let mut pairs = 0;
            for a in 0..n {
                for b in 0..n {
                    let (p, q) = (ends[a], ends[b]);
                    if a != b && (p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1) {
                        pairs += 1;
                    }
                }
            }
            (n, cells, pairs + 2 * 4 * cells)
        }
        _ => {
            let diagonal = kind == PuzzleKind::Mosaic;
            let mut pairs = 0;
            for a in 0..cells {
                for b in 0..cells {
                    let dr = (a / w).abs_diff(b / w);
                    let dc = (a % w).abs_diff(b % w);
                    let adjacent = dr + dc == 1 || (diagonal && dr == 1 && dc == 1);
                    pairs += usize::from(adjacent);
                }
            }
            let lines = matches!(kind, PuzzleKind::Tents | PuzzleKind::Unruly);
            let meta = if lines { w + h } else { 0 };
            (cells, meta, pairs + if lines { 4 * cells } else { 0 })
        }
    }
}

fn topology_forms() -> Outcome {
    let mut sizes = 0;
    for kind in PuzzleKind::ALL {
        for grid in suite_sizes(kind) {
            let topo = topology(&blank_layout(kind, grid));
            let spec = TopologySpec::of(kind, grid);
            let (dec, meta, edges) = brute_edge_count(kind, grid);
            let got = (topo.decision_nodes, topo.meta_nodes, topo.edges.len());
            ensure(got == (dec, meta, edges), || format!("{kind} {grid}: built {got:?}, expected {:?}", (dec, meta, edges)))?;
            ensure((spec.decision_nodes, spec.meta_nodes, spec.directed_edges) == got, || {
                format!("{kind} {grid}: closed form {spec:?}, built {got:?}")
            })?;
            let set: HashSet<[u32; 2]> = topo.edges.iter().copied().collect();
            ensure(set.len() == topo.edges.len(), || format!("{kind} {grid}: duplicate edges"))?;
            ensure(topo.edges.iter().all(|&[a, b]| a != b && set.contains(&[b, a])), || {
                format!("{kind} {grid}: self-loop or missing reverse edge")
            })?;
            ensure(topo.edge_dirs.len() == topo.edges.len(), || format!("{kind} {grid}: edge features misaligned"))?;
            sizes += 1;
        }
    }
    let mut r = rng(5);
    let mut rows = 0;
    for k in 0..1000 {
        let kind = PuzzleKind::ALL[k % 6];
        let (mut w, mut h) = (r.gen_range(2..=9), r.gen_range(2..=9));
        if kind == PuzzleKind::Unruly {
            (w, h) = (w & !1, h & !1);
        }
        let layout = random_layout(kind, GridSpec::new(w, h), &mut r);
        let values = random_values(&layout, &mut r);
        let obs = encode(&PuzzleState::new(layout, values).map_err(e2s)?);
        ensure(obs.features.len() == obs.node_count() * kind.feature_width(), || format!("{kind}: feature matrix shape"))?;
        let group = one_hot_group(kind);
        if group.is_empty() {
            continue;
        }
        for node in 0..obs.topology.decision_nodes {
            let sum: f32 = obs.row(node)[group.clone()].iter().sum();
            ensure(sum == 1.0, || format!("{kind} {w}x{h} node {node}: one-hot sums to {sum}"))?;
            rows += 1;
        }
    }
    Ok(format!("{sizes} (kind, size) pairs match; {rows} one-hot rows over 1000 observations sum to 1"))
}

fn brute_force() -> Outcome {
    // net 2x2: every tile combination, every orientation
    let mut layouts = 0;
    let mut states = 0;
    for code in 0..15u32.pow(4) {
        let tiles: Vec<u8> = (0..4).map(|k| (code / 15u32.pow(k) % 15 + 1) as u8).collect();
        let layout = Layout {
            kind: PuzzleKind::Net,
            grid: GridSpec::square(2),
            fixed: vec![None; 4],
            clues: Clues::Net { tiles: tiles.clone(), source: code as usize % 4 },
        };
        let all = enumerate(&layout.fixed, |i| (0..net_period(tiles[i])).collect());
        let mut expected = Vec::new();
        for v in all {
            let naive = naive_net_solved(&layout, &v);
            ensure(rules::is_solved(&layout, &v) == naive, || format!("net {tiles:?} at {v:?}: is_solved != {naive}"))?;
            if naive {
                expected.push(v);
            }
            states += 1;
        }
        check_solve(&layout, expected)?;
        layouts += 1;
    }
    // unruly 2x2: every set of givens, every board including empty cells
    for code in 0..3u32.pow(4) {
        let fixed: Vec<Option<u8>> = (0..4)
            .map(|k| match code / 3u32.pow(k) % 3 {
                0 => None,
                x => Some(x as u8),
            })
            .collect();
        let layout = Layout { kind: PuzzleKind::Unruly, grid: GridSpec::square(2), fixed, clues: Clues::Unruly };
        for v in enumerate(&layout.fixed, |_| vec![0, 1, 2]) {
            let naive = naive_unruly_solved(&layout, &v);
            ensure(rules::is_solved(&layout, &v) == naive, || format!("unruly {:?} at {v:?}: is_solved != {naive}", layout.fixed))?;
            states += 1;
        }
        let expected: Vec<_> = enumerate(&layout.fixed, |_| vec![1, 2])
            .into_iter()
            .filter(|v| naive_unruly_solved(&layout, v))
            .collect();
        check_solve(&layout, expected)?;
        layouts += 1;
    }
    Ok(format!("{layouts} layouts, {states} states agree with enumeration"))
}

fn check_solve(layout: &Layout, mut expected: Vec<Vec<u8>>) -> Result<(), String> {
    let r = solve(layout, 1024).map_err(e2s)?;
    let mut got = r.solutions.clone();
    got.sort();
    expected.sort();
    ensure(got == expected, || format!("{layout:?}: solver found {got:?}, enumeration {expected:?}"))?;
    let verdict = match expected.len() {
        0 => Verdict::None,
        1 => Verdict::Unique,
        _ => Verdict::Multiple,
    };
    ensure(r.verdict == verdict, || format!("{layout:?}: verdict {:?}, expected {verdict:?}", r.verdict))
}

fn remote_eval(addr: std::net::SocketAddr, agent: &mut dyn Agent, suites: &[TestSuite]) -> Result<EvalReport, String> {
    let mut backend = RemoteBackend::new(Client::connect(addr).map_err(e2s)?);
    evaluate_seeds(agent, suites, &mut backend, &[0], RewardMode::Iterative).map_err(e2s)
}

fn build_suites(master: u64) -> Result<Vec<TestSuite>, String> {
    PuzzleKind::ALL
        .into_iter()
        .map(|k| build_suite(k, master, &HashSet::new()).map_err(e2s))
        .collect()
}

fn corpus_text(suites: &[TestSuite]) -> String {
    suites.iter().flat_map(|s| &s.sets).map(|set| write_corpus(&set.instances)).collect()
}

fn end_to_end() -> Outcome {
    let listener = TcpListener::bind("127.0.0.1:0").map_err(e2s)?;
    let addr = listener.local_addr().map_err(e2s)?;
    let config = Arc::new(ServerConfig::default());
    thread::spawn(move || serve_listener(config, listener));

    let start = Instant::now();
    let suites = build_suites(2024)?;
    let built = start.elapsed();
    let oracle = remote_eval(addr, &mut OracleAgent, &suites)?;
    let noop = remote_eval(addr, &mut NoopAgent, &suites)?;
    for row in &oracle.rows {
        ensure(row.solved == 50 && row.played == 50, || {
            format!("oracle {} {} ({}): {}/{}", row.kind, row.grid, row.label, row.solved, row.played)
        })?;
    }
    for row in &noop.rows {
        ensure(row.solved == 0 && row.played == 50, || {
            format!("noop {} {} ({}): {}/{}", row.kind, row.grid, row.label, row.solved, row.played)
        })?;
    }
    ensure(oracle.rows.len() == 36 && noop.rows.len() == 36, || "expected 36 test sets".into())?;

    let again = build_suites(2024)?;
    ensure(corpus_text(&again) == corpus_text(&suites), || "suites differ between builds".into())?;
    let oracle2 = remote_eval(addr, &mut OracleAgent, &again)?;
    let noop2 = remote_eval(addr, &mut NoopAgent, &again)?;
    ensure(oracle2.to_csv() == oracle.to_csv() && noop2.to_csv() == noop.to_csv(), || "reports differ between runs".into())?;
    ensure(oracle2.to_text() == oracle.to_text(), || "summaries differ between runs".into())?;
    Ok(format!(
        "36 sets: oracle 50/50, noop 0/50 via TCP; reproducible; suites built in {:.1}s, total {:.1}s",
        built.as_secs_f64(),
        start.elapsed().as_secs_f64()
    ))
}

fn iqm_arithmetic() -> Outcome {
    let samples = [0.0, 0.0, 100.0, 100.0];
    let point = iqm(&samples).map_err(e2s)?;
    ensure(point == 50.0, || format!("iqm {point}"))?;
    let ci = iqm_ci(&samples, 2000, 0).map_err(e2s)?;
    ensure(ci.iqm == 50.0 && ci.lower <= 50.0 && ci.upper >= 50.0, || format!("{ci:?}"))?;
    let flat = iqm_ci(&[37.5; 12], 2000, 3).map_err(e2s)?;
    ensure(flat.iqm == 37.5 && flat.lower == 37.5 && flat.upper == 37.5, || format!("constant samples: {flat:?}"))?;
    let strata = vec![vec![80.0; 5], vec![80.0; 5], vec![80.0; 5]];
    let flat = iqm_ci_stratified(&strata, 500, 1).map_err(e2s)?;
    ensure(flat.lower == 80.0 && flat.upper == 80.0, || format!("constant strata: {flat:?}"))?;
    Ok(format!("iqm {{0,0,100,100}} = {point}, CI [{}, {}]; constant samples give a point interval", ci.lower, ci.upper))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("uniqueness", uniqueness),
        ("distinct-configurations", distinct_configs),
        ("reward-properties", reward_properties),
        ("violation-oracle", violation_oracle),
        ("topology-closed-forms", topology_forms),
        ("brute-force-equivalence", brute_force),
        ("end-to-end-protocol", end_to_end),
        ("iqm-arithmetic", iqm_arithmetic),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{:.1}s]", start.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
