use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Candidate, PROBE_NODES};
use crate::instance::{Clues, Layout};
use crate::puzzle::{GridSpec, PuzzleKind};
use crate::rules::unruly::{BLACK, WHITE};
use crate::solver::{self, Options};

pub(super) fn attempt(grid: GridSpec, rng: &mut ChaCha8Rng) -> Option<Candidate> {
    let n = grid.cells();
    let mut layout = Layout {
        kind: PuzzleKind::Unruly,
        grid,
        fixed: vec![None; n],
        clues: Clues::Unruly,
    };
    // steering the search away from a random board randomises value order
    let noise: Vec<u8> = (0..n).map(|_| if rng.gen_bool(0.5) { WHITE } else { BLACK }).collect();
    let fill = solver::search(
        &layout,
        &Options { cap: 1, node_limit: Some(2 * n as u64), avoid: Some(&noise), force: None },
    );
    let solution = fill.solutions.into_iter().next()?;
    layout.fixed = solution.iter().map(|&v| Some(v)).collect();
    // Dropping given `i` keeps the puzzle unique exactly when no solution
    // puts the other colour there, which is a much smaller search.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in order {
        layout.fixed[i] = None;
        let other = 1 << (WHITE + BLACK - solution[i]);
        if solver::satisfiable_with(&layout, i, other, Some(PROBE_NODES)) != Some(false) {
            layout.fixed[i] = Some(solution[i]);
        }
    }
    Some((layout, solution))
}
