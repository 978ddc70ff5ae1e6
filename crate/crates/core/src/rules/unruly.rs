//! Unruly: fill every cell black or white with no three equal colours in a
//! row or column and equally many of each colour per line.

use super::Violations;
use crate::instance::Layout;

pub const EMPTY: u8 = 0;
pub const WHITE: u8 = 1;
pub const BLACK: u8 = 2;

pub const HORIZONTAL: u8 = 1;
pub const VERTICAL: u8 = 2;
pub const NUMBER: u8 = 4;

/// Cells in runs of three or more get the horizontal/vertical flag; every cell
/// of an over-full line gets the number flag. Meta-nodes (rows, then columns)
/// carry the number flag of their line.
pub fn violations(layout: &Layout, values: &[u8]) -> Violations {
    let g = layout.grid;
    let (w, h) = (g.width, g.height);
    let mut out = Violations::clear(values.len(), w + h);

    let rows = (0..h).map(|r| ((0..w).map(|c| r * w + c).collect::<Vec<_>>(), HORIZONTAL, r));
    let cols = (0..w).map(|c| ((0..h).map(|r| r * w + c).collect::<Vec<_>>(), VERTICAL, h + c));
    for (cells, run_flag, meta) in rows.chain(cols) {
        let mut start = 0;
        while start < cells.len() {
            let colour = values[cells[start]];
            let mut end = start + 1;
            while end < cells.len() && values[cells[end]] == colour {
                end += 1;
            }
            if colour != EMPTY && end - start >= 3 {
                for &i in &cells[start..end] {
                    out.decision[i] |= run_flag;
                }
            }
            start = end;
        }
        let half = cells.len() / 2;
        let whites = cells.iter().filter(|&&i| values[i] == WHITE).count();
        let blacks = cells.iter().filter(|&&i| values[i] == BLACK).count();
        if whites > half || blacks > half {
            out.meta[meta] = NUMBER;
            for &i in &cells {
                out.decision[i] |= NUMBER;
            }
        }
    }
    out
}

pub fn is_solved(layout: &Layout, values: &[u8]) -> bool {
    values.iter().all(|&v| v != EMPTY) && !violations(layout, values).any()
}
