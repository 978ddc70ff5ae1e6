//! Light Up: place bulbs so every open cell is lit, no two bulbs see each
//! other, and numbered black squares have exactly that many adjacent bulbs.
//!
//! Black squares are fixed cells holding [`EMPTY`]; whether an open cell is
//! lit is derived from the bulbs, never stored.

use super::Violations;
use crate::instance::{Clues, Layout};
use crate::puzzle::GridSpec;

pub const EMPTY: u8 = 0;
pub const BULB: u8 = 1;

pub(crate) fn numbers(layout: &Layout) -> &[Option<u8>] {
    match &layout.clues {
        Clues::Lightup { numbers } => numbers,
        _ => unreachable!("lightup rules on a {} layout", layout.kind),
    }
}

pub fn is_black(layout: &Layout, i: usize) -> bool {
    layout.is_fixed(i)
}

/// Maximal horizontal and vertical runs of open cells.
pub(crate) fn segments(layout: &Layout) -> Vec<Vec<usize>> {
    let g = layout.grid;
    let mut out = Vec::new();
    let mut push_runs = |cells: &mut dyn Iterator<Item = usize>| {
        let mut run = Vec::new();
        for i in cells {
            if is_black(layout, i) {
                if !run.is_empty() {
                    out.push(std::mem::take(&mut run));
                }
            } else {
                run.push(i);
            }
        }
        if !run.is_empty() {
            out.push(run);
        }
    };
    for r in 0..g.height {
        push_runs(&mut (0..g.width).map(|c| g.index(r, c)));
    }
    for c in 0..g.width {
        push_runs(&mut (0..g.height).map(|r| g.index(r, c)));
    }
    out
}

/// Per cell: lit by some bulb (bulb cells count as lit).
pub fn lit(layout: &Layout, values: &[u8]) -> Vec<bool> {
    let mut out = vec![false; values.len()];
    for seg in segments(layout) {
        if seg.iter().any(|&i| values[i] == BULB) {
            for i in seg {
                out[i] = true;
            }
        }
    }
    out
}

fn adjacent_counts(g: GridSpec, layout: &Layout, values: &[u8], i: usize) -> (u8, u8) {
    g.orthogonal(i)
        .filter(|&(_, j)| !is_black(layout, j))
        .fold((0, 0), |(b, e), (_, j)| if values[j] == BULB { (b + 1, e) } else { (b, e + 1) })
}

pub fn violations(layout: &Layout, values: &[u8]) -> Violations {
    let mut out = Violations::clear(values.len(), 0);
    for seg in segments(layout) {
        if seg.iter().filter(|&&i| values[i] == BULB).count() > 1 {
            for i in seg.into_iter().filter(|&i| values[i] == BULB) {
                out.decision[i] = 1;
            }
        }
    }
    for (i, n) in numbers(layout).iter().enumerate() {
        if let Some(n) = *n {
            let (bulbs, open) = adjacent_counts(layout.grid, layout, values, i);
            if bulbs > n || bulbs + open < n {
                out.decision[i] = 1;
            }
        }
    }
    out
}

pub fn is_solved(layout: &Layout, values: &[u8]) -> bool {
    let lit = lit(layout, values);
    (0..values.len()).all(|i| is_black(layout, i) || lit[i])
        && !violations(layout, values).any()
        && numbers(layout).iter().enumerate().all(|(i, n)| {
            n.is_none_or(|n| adjacent_counts(layout.grid, layout, values, i).0 == n)
        })
}
