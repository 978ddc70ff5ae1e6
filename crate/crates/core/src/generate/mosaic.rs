use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{minimize, Candidate};
use crate::instance::{Clues, Layout};
use crate::puzzle::{GridSpec, PuzzleKind};
use crate::rules::mosaic::{BLANK, MARKED};
use crate::solver;

pub(super) fn attempt(grid: GridSpec, rng: &mut ChaCha8Rng) -> Option<Candidate> {
    let n = grid.cells();
    let solution: Vec<u8> = (0..n).map(|_| if rng.gen_bool(0.5) { MARKED } else { BLANK }).collect();
    let full: Vec<Option<u8>> = (0..n)
        .map(|i| Some(grid.block(i).filter(|&j| solution[j] == MARKED).count() as u8))
        .collect();
    let mut layout = Layout {
        kind: PuzzleKind::Mosaic,
        grid,
        fixed: vec![None; n],
        clues: Clues::Mosaic { numbers: full.clone() },
    };
    if solver::unique_given(&layout, &solution, Some(super::PROBE_NODES * 10)) != Some(true) {
        return None;
    }
    minimize(&mut layout, &solution, (0..n).collect(), rng, |l, i, on| {
        if let Clues::Mosaic { numbers } = &mut l.clues {
            numbers[i] = if on { full[i] } else { None };
        }
    });
    Some((layout, solution))
}
