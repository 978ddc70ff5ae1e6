use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{minimize, Candidate};
use crate::instance::{Clues, Layout};
use crate::puzzle::{GridSpec, PuzzleKind};
use crate::rules::loopy::{single_loop, Geometry, LINE, NO_LINE};
use crate::solver;

/// Edge values for the boundary of a face region.
fn boundary(geo: &Geometry, inside: &[bool]) -> Vec<u8> {
    let mut v = vec![NO_LINE; geo.edge_count()];
    for f in (0..inside.len()).filter(|&f| inside[f]) {
        for e in geo.face_edges(f) {
            v[e] = if v[e] == LINE { NO_LINE } else { LINE };
        }
    }
    v
}

/// Grows a random face region whose boundary is one simple loop.
fn random_loop(grid: GridSpec, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let geo = Geometry::new(grid);
    let n = grid.cells();
    let mut inside = vec![false; n];
    inside[rng.gen_range(0..n)] = true;
    let lo = (n / 3).max(1);
    let hi = (2 * n / 3).max(lo + 1);
    let target = rng.gen_range(lo..hi);
    let mut size = 1;
    while size < target {
        let mut frontier: Vec<usize> = (0..n)
            .filter(|&f| !inside[f] && grid.orthogonal(f).any(|(_, g)| inside[g]))
            .collect();
        frontier.shuffle(rng);
        let mut grown = false;
        for f in frontier {
            inside[f] = true;
            if single_loop(&geo, &boundary(&geo, &inside)) {
                grown = true;
                size += 1;
                break;
            }
            inside[f] = false;
        }
        if !grown {
            break;
        }
    }
    boundary(&geo, &inside)
}

pub(super) fn attempt(grid: GridSpec, rng: &mut ChaCha8Rng) -> Option<Candidate> {
    let geo = Geometry::new(grid);
    let solution = random_loop(grid, rng);
    let faces: Vec<Option<u8>> = (0..grid.cells())
        .map(|f| Some(geo.face_edges(f).iter().filter(|&&e| solution[e] == LINE).count() as u8))
        .collect();
    let full = faces.clone();
    let mut layout = Layout {
        kind: PuzzleKind::Loopy,
        grid,
        fixed: vec![None; geo.edge_count()],
        clues: Clues::Loopy { faces },
    };
    if solver::unique_given(&layout, &solution, Some(super::PROBE_NODES * 10)) != Some(true) {
        return None;
    }
    minimize(&mut layout, &solution, (0..grid.cells()).collect(), rng, |l, f, on| {
        if let Clues::Loopy { faces } = &mut l.clues {
            faces[f] = if on { full[f] } else { None };
        }
    });
    Some((layout, solution))
}
