//! Mosaic: colour every cell; a clue counts the black cells in the 3x3 block
//! around it, itself included.

use super::Violations;
use crate::instance::{Clues, Layout};

pub const UNMARKED: u8 = 0;
pub const MARKED: u8 = 1;
pub const BLANK: u8 = 2;

pub(crate) fn numbers(layout: &Layout) -> &[Option<u8>] {
    match &layout.clues {
        Clues::Mosaic { numbers } => numbers,
        _ => unreachable!("mosaic rules on a {} layout", layout.kind),
    }
}

/// `(marked, unmarked)` counts in the block around `i`.
pub(crate) fn block_counts(layout: &Layout, values: &[u8], i: usize) -> (u8, u8) {
    layout.grid.block(i).fold((0, 0), |(m, u), j| match values[j] {
        MARKED => (m + 1, u),
        UNMARKED => (m, u + 1),
        _ => (m, u),
    })
}

pub fn violations(layout: &Layout, values: &[u8]) -> Violations {
    let mut out = Violations::clear(values.len(), 0);
    for (i, clue) in numbers(layout).iter().enumerate() {
        if let Some(c) = *clue {
            let (m, u) = block_counts(layout, values, i);
            if m > c || m + u < c {
                out.decision[i] = 1;
            }
        }
    }
    out
}

/// Whether the clue at `i` is fully decided and satisfied.
pub fn clue_satisfied(layout: &Layout, values: &[u8], i: usize) -> bool {
    numbers(layout)[i].is_some_and(|c| block_counts(layout, values, i) == (c, 0))
}

pub fn is_solved(layout: &Layout, values: &[u8]) -> bool {
    values.iter().all(|&v| v != UNMARKED)
        && numbers(layout)
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_none() || clue_satisfied(layout, values, i))
}
