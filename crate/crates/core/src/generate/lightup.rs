use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{minimize, Candidate};
use crate::instance::{Clues, Layout};
use crate::puzzle::{GridSpec, PuzzleKind};
use crate::rules::lightup::{lit, BULB, EMPTY};
use crate::solver;

const BLACK_DENSITY: f64 = 0.2;
const PROBE_NODES: u64 = 100_000;

fn layout_for(grid: GridSpec, black: &[bool], bulbs: &[u8]) -> Layout {
    let numbers = (0..grid.cells())
        .map(|i| {
            black[i].then(|| {
                grid.orthogonal(i).filter(|&(_, j)| bulbs[j] == BULB).count() as u8
            })
        })
        .collect();
    Layout {
        kind: PuzzleKind::Lightup,
        grid,
        fixed: black.iter().map(|&b| b.then_some(EMPTY)).collect(),
        clues: Clues::Lightup { numbers },
    }
}

/// Adds bulbs on random unlit cells until everything is lit. An unlit cell
/// sees no bulb, so every placement is legal.
fn light_everything(layout: &Layout, bulbs: &mut [u8], rng: &mut ChaCha8Rng) {
    let mut order: Vec<usize> = (0..bulbs.len()).filter(|&i| !layout.is_fixed(i)).collect();
    order.shuffle(rng);
    let mut lit_now = lit(layout, bulbs);
    for i in order {
        if !lit_now[i] {
            bulbs[i] = BULB;
            lit_now = lit(layout, bulbs);
        }
    }
}

pub(super) fn attempt(grid: GridSpec, rng: &mut ChaCha8Rng) -> Option<Candidate> {
    let n = grid.cells();
    let mut black: Vec<bool> = (0..n).map(|_| rng.gen_bool(BLACK_DENSITY)).collect();
    if black.iter().all(|&b| b) {
        return None;
    }
    let mut bulbs = vec![EMPTY; n];
    light_everything(&layout_for(grid, &black, &bulbs), &mut bulbs, rng);

    let mut unique = false;
    for _ in 0..(2 * n + 20) {
        let layout = layout_for(grid, &black, &bulbs);
        match solver::other_solution(&layout, &bulbs, Some(PROBE_NODES)) {
            Ok(None) => {
                unique = true;
                break;
            }
            Ok(Some(other)) => {
                // block the ambiguity with a new black square
                let diff: Vec<usize> = (0..n).filter(|&i| other[i] != bulbs[i]).collect();
                let cell = diff[rng.gen_range(0..diff.len())];
                black[cell] = true;
                bulbs[cell] = EMPTY;
                if black.iter().all(|&b| b) {
                    return None;
                }
                light_everything(&layout_for(grid, &black, &bulbs), &mut bulbs, rng);
            }
            Err(()) => return None,
        }
    }
    if !unique {
        return None;
    }
    let mut layout = layout_for(grid, &black, &bulbs);
    let full = match &layout.clues {
        Clues::Lightup { numbers } => numbers.clone(),
        _ => unreachable!(),
    };
    let numbered: Vec<usize> = (0..n).filter(|&i| black[i]).collect();
    minimize(&mut layout, &bulbs, numbered, rng, |l, i, on| {
        if let Clues::Lightup { numbers } = &mut l.clues {
            numbers[i] = if on { full[i] } else { None };
        }
    });
    Some((layout, bulbs))
}
