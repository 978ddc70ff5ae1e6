use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Candidate;
use crate::instance::{Clues, Layout};
use crate::puzzle::{GridSpec, PuzzleKind};
use crate::rules::tents::{GRASS, TENT, TREE};
use crate::solver;

const PROBE_NODES: u64 = 100_000;

fn layout_for(grid: GridSpec, board: &[u8]) -> Layout {
    let mut rows = vec![0u8; grid.height];
    let mut cols = vec![0u8; grid.width];
    for (i, _) in board.iter().enumerate().filter(|(_, &v)| v == TENT) {
        let (r, c) = grid.coords(i);
        rows[r] += 1;
        cols[c] += 1;
    }
    Layout {
        kind: PuzzleKind::Tents,
        grid,
        fixed: board.iter().map(|&v| (v == TREE).then_some(TREE)).collect(),
        clues: Clues::Tents { rows, cols },
    }
}

pub(super) fn attempt(grid: GridSpec, rng: &mut ChaCha8Rng) -> Option<Candidate> {
    let n = grid.cells();
    let mut board = vec![GRASS; n];
    // tent cell -> its tree
    let mut partner = vec![usize::MAX; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for c in order {
        if board[c] != GRASS || grid.king(c).any(|j| board[j] == TENT) {
            continue;
        }
        let spots: Vec<usize> = grid
            .orthogonal(c)
            .map(|(_, j)| j)
            .filter(|&j| board[j] == GRASS)
            .collect();
        if spots.is_empty() {
            continue;
        }
        let t = spots[rng.gen_range(0..spots.len())];
        board[c] = TENT;
        board[t] = TREE;
        partner[c] = t;
        partner[t] = c;
    }

    for _ in 0..(2 * n + 20) {
        if !board.contains(&TENT) {
            return None;
        }
        let layout = layout_for(grid, &board);
        match solver::other_solution(&layout, &board, Some(PROBE_NODES)) {
            Ok(None) => return Some((layout, board)),
            Ok(Some(other)) => {
                let diff: Vec<usize> = (0..n).filter(|&i| other[i] != board[i]).collect();
                let cell = diff[rng.gen_range(0..diff.len())];
                // drop the tent/tree pair closest to the ambiguity
                let victim = if board[cell] == TENT {
                    cell
                } else {
                    let (r, c) = grid.coords(cell);
                    (0..n)
                        .filter(|&i| board[i] == TENT)
                        .min_by_key(|&i| {
                            let (r2, c2) = grid.coords(i);
                            r.abs_diff(r2) + c.abs_diff(c2)
                        })
                        .expect("at least one tent")
                };
                board[partner[victim]] = GRASS;
                board[victim] = GRASS;
            }
            Err(()) => return None,
        }
    }
    None
}
