mod common;

use graph_puzzles::env::{noop_policy, oracle_policy, random_policy};
use graph_puzzles::eval::{iqm, iqm_ci, EvalReport, EvalRow};
use graph_puzzles::generate::{generate, training_size};
use graph_puzzles::graph::{encode, topology, EdgeDir};
use graph_puzzles::{Env, EnvConfig, GridSpec, PuzzleKind, PuzzleState, RewardMode};
use proptest::prelude::*;

use common::*;

fn kind() -> impl Strategy<Value = PuzzleKind> {
    prop::sample::select(PuzzleKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn normalized_rewards_are_scaled(kind in kind(), seed in 0u64..10_000, mode in prop::sample::select(RewardMode::ALL.to_vec())) {
        let g = training_size(kind);
        let inst = generate(kind, g, seed).unwrap();
        let mut raw = Env::new(EnvConfig::new(kind, g).reward_mode(mode)).unwrap();
        let mut norm = Env::new(EnvConfig { normalize_reward: true, ..EnvConfig::new(kind, g).reward_mode(mode) }).unwrap();
        let obs = raw.reset_with(inst.clone()).unwrap();
        norm.reset_with(inst.clone()).unwrap();
        let n = obs.topology.decision_nodes as f64;
        let mut k = 0;
        loop {
            let a = random_policy(&obs, seed ^ k);
            let (x, y) = (raw.step(&a).unwrap(), norm.step(&a).unwrap());
            prop_assert!((x.reward / n - y.reward).abs() < 1e-12);
            prop_assert!(y.reward <= 1.0);
            if x.done {
                break;
            }
            k += 1;
        }
    }

    #[test]
    fn oracle_solves_in_one_step(kind in kind(), seed in 0u64..10_000) {
        let g = training_size(kind);
        let mut env = Env::new(EnvConfig::new(kind, g)).unwrap();
        env.reset(seed).unwrap();
        let inst = env.instance().unwrap().clone();
        let a = oracle_policy(env.state().unwrap(), &inst);
        let out = env.step(&a).unwrap();
        prop_assert!(out.done && out.info.solved);
        prop_assert_eq!(out.info.quality, inst.solution.len());
        prop_assert!(env.step(&a).is_err());
    }

    #[test]
    fn iqm_is_bounded_and_order_free(mut xs in prop::collection::vec(0.0f64..100.0, 4..40), shift in -50.0f64..50.0) {
        let m = iqm(&xs).unwrap();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= m && m <= hi);
        xs.reverse();
        prop_assert!((iqm(&xs).unwrap() - m).abs() < 1e-9);
        let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        prop_assert!((iqm(&shifted).unwrap() - (m + shift)).abs() < 1e-9);
        let ci = iqm_ci(&xs, 200, 1).unwrap();
        prop_assert!(ci.lower <= ci.iqm && ci.iqm <= ci.upper);
    }
}

#[test]
fn noop_episodes_run_to_the_horizon() {
    for kind in PuzzleKind::ALL {
        let g = training_size(kind);
        let mut env = Env::new(EnvConfig::new(kind, g).horizon(7)).unwrap();
        let obs = env.reset(3).unwrap();
        let before = env.state().unwrap().values().to_vec();
        let mut steps = 0;
        loop {
            let out = env.step(&noop_policy(&obs)).unwrap();
            steps += 1;
            assert_eq!(out.reward, 0.0);
            if out.done {
                break;
            }
        }
        assert_eq!(steps, 7, "{kind}");
        assert_eq!(env.state().unwrap().values(), &before[..]);
    }
    assert!(EnvConfig::new(PuzzleKind::Net, GridSpec::square(4)).horizon(0).validate().is_err());
}

#[test]
fn random_policy_is_uniform() {
    // 3 sigma per action over 10^5 draws
    let inst = generate(PuzzleKind::Loopy, GridSpec::square(4), 0).unwrap();
    let obs = encode(&PuzzleState::initial(&inst));
    let na = obs.num_actions;
    let mut counts = vec![0f64; na];
    let mut draws = 0f64;
    let mut seed = 0;
    while draws < 100_000.0 {
        for a in random_policy(&obs, seed) {
            counts[a as usize] += 1.0;
            draws += 1.0;
        }
        seed += 1;
    }
    let p = 1.0 / na as f64;
    let sigma = (draws * p * (1.0 - p)).sqrt();
    for (a, c) in counts.iter().enumerate() {
        assert!((c - draws * p).abs() <= 3.0 * sigma, "action {a}: {c} of {draws}");
    }
    assert_eq!(random_policy(&obs, 9), random_policy(&obs, 9));
}

#[test]
fn interior_nodes_have_the_same_neighbourhood_at_every_size() {
    for kind in PuzzleKind::ALL {
        let mut seen = None;
        for n in [6, 10, 16] {
            let grid = GridSpec::square(n);
            let topo = topology(&blank_layout(kind, grid));
            let node = match kind {
                // the horizontal edge along the top of face (3, 3)
                PuzzleKind::Loopy => 3 * n + 3,
                _ => grid.index(3, 3),
            };
            let mut dirs: Vec<usize> = topo
                .edges
                .iter()
                .zip(&topo.edge_dirs)
                .filter(|(e, _)| e[0] as usize == node)
                .map(|(_, d)| d.index())
                .collect();
            dirs.sort();
            match &seen {
                None => seen = Some(dirs),
                Some(prev) => assert_eq!(prev, &dirs, "{kind} {grid}"),
            }
        }
    }
}

#[test]
fn edge_directions_invert() {
    let topo = topology(&blank_layout(PuzzleKind::Mosaic, GridSpec::square(5)));
    let lookup: std::collections::HashMap<_, _> = topo.edges.iter().zip(&topo.edge_dirs).collect();
    for (e, d) in &lookup {
        let back = lookup[&[e[1], e[0]]];
        let (a, b) = (d.index(), back.index());
        assert_ne!(a, b);
        assert!(a < EdgeDir::COUNT && b < EdgeDir::COUNT);
    }
}

#[test]
fn csv_marks_missing_runs() {
    let row = |seed, solved, missing| EvalRow {
        kind: PuzzleKind::Net,
        grid: GridSpec::square(4),
        label: "train".into(),
        seed,
        solved,
        played: 50 - missing,
        missing,
    };
    let report = EvalReport::new("oracle", vec![row(0, 50, 0), row(1, 20, 30)], 100, 0).unwrap();
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("kind,size,seed,solved"));
    assert_eq!(lines.next(), Some("net,4x4,0,50"));
    assert_eq!(lines.next(), Some("net,4x4,1,NA"));
}
