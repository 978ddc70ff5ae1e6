use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Candidate;
use crate::instance::{Clues, Layout};
use crate::puzzle::{Dir, GridSpec, PuzzleKind};
use crate::rules::net::{period, rotate};
use crate::solver;

const PROBE_NODES: u64 = 200_000;

/// Uniform spanning tree of the cell grid by Wilson's loop-erased walks.
/// Returns the connector mask of every cell.
fn spanning_tree(grid: GridSpec, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let n = grid.cells();
    let mut in_tree = vec![false; n];
    let mut next: Vec<Option<(Dir, usize)>> = vec![None; n];
    in_tree[rng.gen_range(0..n)] = true;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for start in order {
        let mut u = start;
        while !in_tree[u] {
            let nbrs: Vec<(Dir, usize)> = grid.orthogonal(u).collect();
            let step = nbrs[rng.gen_range(0..nbrs.len())];
            next[u] = Some(step);
            u = step.1;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u].expect("walk pointer").1;
        }
    }
    let mut tiles = vec![0u8; n];
    for (u, link) in next.iter().enumerate() {
        if let Some((d, v)) = *link {
            tiles[u] |= d.bit();
            tiles[v] |= d.opposite().bit();
        }
    }
    tiles
}

fn links(grid: GridSpec, tiles: &[u8]) -> Vec<(usize, Dir, usize)> {
    let mut out = Vec::new();
    for u in 0..grid.cells() {
        for d in [Dir::E, Dir::S] {
            if let Some(v) = grid.step(u, d) {
                out.push((u, d, v));
            }
        }
    }
    out.retain(|&(u, d, _)| tiles[u] & d.bit() != 0);
    out
}

/// Replaces one tree link at `cell` by another link across the same cut,
/// preferring links that touch `hot` cells.
fn perturb(grid: GridSpec, tiles: &mut [u8], cell: usize, hot: &[bool], rng: &mut ChaCha8Rng) {
    let incident: Vec<Dir> = Dir::ALL.into_iter().filter(|d| tiles[cell] & d.bit() != 0).collect();
    let d = incident[rng.gen_range(0..incident.len())];
    let other = grid.step(cell, d).expect("tree link leaves the grid");
    tiles[cell] &= !d.bit();
    tiles[other] &= !d.opposite().bit();
    // side of the cut containing `cell`
    let mut side = vec![false; grid.cells()];
    let mut stack = vec![cell];
    side[cell] = true;
    while let Some(u) = stack.pop() {
        for (dir, v) in grid.orthogonal(u) {
            if tiles[u] & dir.bit() != 0 && !side[v] {
                side[v] = true;
                stack.push(v);
            }
        }
    }
    let mut crossing: Vec<(usize, Dir, usize)> = Vec::new();
    for u in (0..grid.cells()).filter(|&u| side[u]) {
        for (dir, v) in grid.orthogonal(u) {
            if !side[v] && !(u == cell && v == other) {
                crossing.push((u, dir, v));
            }
        }
    }
    let preferred: Vec<_> = crossing.iter().copied().filter(|&(u, _, v)| hot[u] || hot[v]).collect();
    let pool = if preferred.is_empty() { &crossing } else { &preferred };
    let (u, dir, v) = if pool.is_empty() {
        (cell, d, other)
    } else {
        pool[rng.gen_range(0..pool.len())]
    };
    tiles[u] |= dir.bit();
    tiles[v] |= dir.opposite().bit();
}

pub(super) fn attempt(grid: GridSpec, rng: &mut ChaCha8Rng) -> Option<Candidate> {
    let n = grid.cells();
    let source = grid.index(grid.height / 2, grid.width / 2);
    let mut tiles = spanning_tree(grid, rng);
    debug_assert_eq!(links(grid, &tiles).len(), n - 1);

    let mut unique = false;
    for _ in 0..(4 * n + 20) {
        let layout = Layout {
            kind: PuzzleKind::Net,
            grid,
            fixed: vec![None; n],
            clues: Clues::Net { tiles: tiles.clone(), source },
        };
        let zeros = vec![0u8; n];
        match solver::other_solution(&layout, &zeros, Some(PROBE_NODES)) {
            Ok(None) => {
                unique = true;
                break;
            }
            Ok(Some(other)) => {
                let hot: Vec<bool> = (0..n).map(|i| other[i] != 0).collect();
                let diff: Vec<usize> = (0..n).filter(|&i| hot[i]).collect();
                let cell = diff[rng.gen_range(0..diff.len())];
                perturb(grid, &mut tiles, cell, &hot, rng);
            }
            Err(()) => return None,
        }
    }
    if !unique {
        return None;
    }

    for _ in 0..64 {
        let turns: Vec<u8> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let presented: Vec<u8> = tiles.iter().zip(&turns).map(|(&t, &r)| rotate(t, r)).collect();
        let solution: Vec<u8> = presented
            .iter()
            .zip(&turns)
            .map(|(&t, &r)| (4 - r) % 4 % period(t))
            .collect();
        if solution.iter().all(|&o| o == 0) {
            continue;
        }
        let layout = Layout {
            kind: PuzzleKind::Net,
            grid,
            fixed: vec![None; n],
            clues: Clues::Net { tiles: presented, source },
        };
        return Some((layout, solution));
    }
    None
}
