mod common;

use std::collections::HashSet;

use graph_puzzles::generate::{count_distinct, generate, generate_many, training_size};
use graph_puzzles::instance::{parse_corpus, write_corpus, Clues, Layout};
use graph_puzzles::solver::{solve, Verdict};
use graph_puzzles::{GridSpec, PuzzleInstance, PuzzleKind, PuzzleState};
use proptest::prelude::*;

use common::*;

fn small_grid(kind: PuzzleKind) -> impl Strategy<Value = GridSpec> {
    let sizes: Vec<usize> = if kind == PuzzleKind::Unruly { vec![4, 6] } else { vec![3, 4, 5] };
    (prop::sample::select(sizes.clone()), prop::sample::select(sizes)).prop_map(|(w, h)| GridSpec::new(w, h))
}

fn kind_and_grid() -> impl Strategy<Value = (PuzzleKind, GridSpec)> {
    prop::sample::select(PuzzleKind::ALL.to_vec()).prop_flat_map(|k| small_grid(k).prop_map(move |g| (k, g)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn generated_instances_solve_back_to_themselves((kind, grid) in kind_and_grid(), seed in 0u64..1_000_000) {
        let inst = generate(kind, grid, seed).unwrap();
        let r = solve(&inst.layout, 2).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Unique);
        prop_assert_eq!(&r.solutions[0], &inst.solution);
        let solved = PuzzleState::solved_board(&inst);
        prop_assert!(solved.is_solved());
        prop_assert!(!solved.violations().any());
        prop_assert!(!PuzzleState::initial(&inst).is_solved() || kind == PuzzleKind::Net);
        prop_assert_eq!(generate(kind, grid, seed).unwrap(), inst);
    }

    #[test]
    fn records_round_trip((kind, grid) in kind_and_grid(), seed in 0u64..1_000_000) {
        let inst = generate(kind, grid, seed).unwrap();
        let back = PuzzleInstance::parse(&inst.to_record()).unwrap();
        prop_assert_eq!(back.config_digest(), inst.config_digest());
        prop_assert_eq!(back, inst);
    }
}

#[test]
fn corpus_round_trip_thousand_per_kind() {
    for kind in PuzzleKind::ALL {
        let corpus = generate_many(kind, training_size(kind), 0, 1000).unwrap();
        let text = write_corpus(&corpus);
        let back = parse_corpus(&text).unwrap();
        assert_eq!(back, corpus, "{kind}");
        assert_eq!(write_corpus(&back), text);
    }
}

#[test]
fn unruly_2x2_configurations_match_enumeration() {
    // minimal given sets with a unique completion
    let grid = GridSpec::square(2);
    let solutions = |fixed: &[Option<u8>]| {
        let layout = Layout { kind: PuzzleKind::Unruly, grid, fixed: fixed.to_vec(), clues: Clues::Unruly };
        enumerate(fixed, |_| vec![1, 2]).into_iter().filter(|v| naive_unruly_solved(&layout, v)).count()
    };
    let mut minimal = 0;
    for fixed in enumerate(&[None; 4], |_| vec![0, 1, 2]) {
        let fixed: Vec<Option<u8>> = fixed.into_iter().map(|x| (x != 0).then_some(x)).collect();
        if solutions(&fixed) != 1 {
            continue;
        }
        let removable = (0..4).filter(|&i| fixed[i].is_some()).any(|i| {
            let mut f = fixed.clone();
            f[i] = None;
            solutions(&f) == 1
        });
        minimal += usize::from(!removable);
    }
    assert_eq!(minimal, 8);
    assert_eq!(count_distinct(PuzzleKind::Unruly, grid, 2000).unwrap(), minimal);
}

#[test]
fn unruly_4x4_solution_count_matches_enumeration() {
    let layout = Layout {
        kind: PuzzleKind::Unruly,
        grid: GridSpec::square(4),
        fixed: vec![None; 16],
        clues: Clues::Unruly,
    };
    let expected = enumerate(&layout.fixed, |_| vec![1, 2])
        .into_iter()
        .filter(|v| naive_unruly_solved(&layout, v))
        .collect::<HashSet<_>>();
    let got = solve(&layout, 10_000).unwrap();
    assert_eq!(got.solutions.len(), expected.len());
    assert_eq!(got.solutions.into_iter().collect::<HashSet<_>>(), expected);
}

#[test]
fn clueless_loopy_has_many_loops() {
    let layout = Layout {
        kind: PuzzleKind::Loopy,
        grid: GridSpec::square(2),
        fixed: vec![None; 12],
        clues: Clues::Loopy { faces: vec![None; 4] },
    };
    let r = solve(&layout, 100).unwrap();
    assert_eq!(r.verdict, Verdict::Multiple);
    // a 2x2 face grid has 13 simple cycles
    assert_eq!(r.solutions.len(), 13);
}

#[test]
fn contradictory_layouts_have_no_solution() {
    let layout = Layout {
        kind: PuzzleKind::Unruly,
        grid: GridSpec::square(2),
        fixed: vec![Some(1), Some(1), None, None],
        clues: Clues::Unruly,
    };
    assert_eq!(solve(&layout, 2).unwrap().verdict, Verdict::None);
    assert!(solve(&layout, 0).is_err());
}

#[test]
fn bad_sizes_are_rejected() {
    assert!(generate(PuzzleKind::Unruly, GridSpec::new(5, 6), 0).is_err());
    assert!(generate(PuzzleKind::Net, GridSpec::new(1, 4), 0).is_err());
    assert!(count_distinct(PuzzleKind::Net, GridSpec::square(3), 0).is_err());
}
