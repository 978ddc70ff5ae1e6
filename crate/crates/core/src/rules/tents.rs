//! Tents: place one tent orthogonally next to every tree, tents never touch
//! (not even diagonally), row and column counts must match the clues.

use super::{max_matching, Violations};
use crate::instance::{Clues, Layout};

pub const EMPTY: u8 = 0;
pub const GRASS: u8 = 1;
pub const TENT: u8 = 2;
pub const TREE: u8 = 3;

pub(crate) fn line_clues(layout: &Layout) -> (&[u8], &[u8]) {
    match &layout.clues {
        Clues::Tents { rows, cols } => (rows, cols),
        _ => unreachable!("tents rules on a {} layout", layout.kind),
    }
}

/// Flags: tents touching another tent, trees that can no longer receive a
/// tent, and row/column meta-nodes whose count is exceeded or unreachable.
/// Meta flags are ordered rows first, then columns.
pub fn violations(layout: &Layout, values: &[u8]) -> Violations {
    let g = layout.grid;
    let mut out = Violations::clear(values.len(), g.width + g.height);
    for i in 0..values.len() {
        match values[i] {
            TENT if g.king(i).any(|j| values[j] == TENT) => out.decision[i] = 1,
            TREE if !g
                .orthogonal(i)
                .any(|(_, j)| values[j] == TENT || values[j] == EMPTY) =>
            {
                out.decision[i] = 1
            }
            _ => {}
        }
    }
    let (rows, cols) = line_clues(layout);
    let mut tents = vec![0u8; g.width + g.height];
    let mut open = vec![0u8; g.width + g.height];
    for (i, &v) in values.iter().enumerate() {
        let (r, c) = g.coords(i);
        for line in [r, g.height + c] {
            match v {
                TENT => tents[line] += 1,
                EMPTY => open[line] += 1,
                _ => {}
            }
        }
    }
    for (line, &clue) in rows.iter().chain(cols).enumerate() {
        if tents[line] > clue || tents[line] + open[line] < clue {
            out.meta[line] = 1;
        }
    }
    out
}

pub fn is_solved(layout: &Layout, values: &[u8]) -> bool {
    let g = layout.grid;
    if values.contains(&EMPTY) {
        return false;
    }
    let (rows, cols) = line_clues(layout);
    let mut row_count = vec![0u8; g.height];
    let mut col_count = vec![0u8; g.width];
    for (i, _) in values.iter().enumerate().filter(|(_, &v)| v == TENT) {
        let (r, c) = g.coords(i);
        row_count[r] += 1;
        col_count[c] += 1;
        if g.king(i).any(|j| values[j] == TENT) {
            return false;
        }
    }
    if row_count != rows || col_count != cols {
        return false;
    }
    tree_tent_matching(layout, values)
}

/// Whether trees and tents admit a perfect one-to-one orthogonal pairing.
pub(crate) fn tree_tent_matching(layout: &Layout, values: &[u8]) -> bool {
    let g = layout.grid;
    let tents: Vec<usize> = (0..values.len()).filter(|&i| values[i] == TENT).collect();
    let trees: Vec<usize> = (0..values.len()).filter(|&i| values[i] == TREE).collect();
    if tents.len() != trees.len() {
        return false;
    }
    let mut tent_slot = vec![usize::MAX; values.len()];
    for (k, &t) in tents.iter().enumerate() {
        tent_slot[t] = k;
    }
    let adj: Vec<Vec<usize>> = trees
        .iter()
        .map(|&t| {
            g.orthogonal(t)
                .filter(|&(_, j)| values[j] == TENT)
                .map(|(_, j)| tent_slot[j])
                .collect()
        })
        .collect();
    max_matching(&adj, tents.len()) == trees.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::{GridSpec, PuzzleKind};

    fn layout(fixed: Vec<Option<u8>>, rows: Vec<u8>, cols: Vec<u8>, w: usize, h: usize) -> Layout {
        Layout {
            kind: PuzzleKind::Tents,
            grid: GridSpec::new(w, h),
            fixed,
            clues: Clues::Tents { rows, cols },
        }
    }

    #[test]
    fn diagonal_tents_are_both_flagged() {
        let l = layout(vec![None; 9], vec![1, 1, 0], vec![1, 1, 0], 3, 3);
        let mut v = vec![EMPTY; 9];
        v[0] = TENT;
        v[4] = TENT;
        let f = violations(&l, &v);
        assert_eq!(f.decision[0], 1);
        assert_eq!(f.decision[4], 1);
        assert_eq!(f.decision.iter().filter(|&&x| x != 0).count(), 2);
    }

    #[test]
    fn row_meta_flags() {
        let l = layout(vec![None; 4], vec![0, 2], vec![1, 1], 2, 2);
        let mut v = vec![GRASS; 4];
        v[0] = TENT;
        let f = violations(&l, &v);
        // row 0 has one tent, clue 0; row 1 cannot reach 2
        assert_eq!(&f.meta[..2], &[1, 1]);
    }

    #[test]
    fn boxed_tree_is_flagged() {
        let mut fixed = vec![None; 4];
        fixed[0] = Some(TREE);
        let l = layout(fixed, vec![1, 0], vec![0, 1], 2, 2);
        let mut v = vec![TREE, EMPTY, GRASS, GRASS];
        assert_eq!(violations(&l, &v).decision[0], 0);
        v[1] = GRASS;
        assert_eq!(violations(&l, &v).decision[0], 1);
        v[1] = TENT;
        assert_eq!(violations(&l, &v).decision[0], 0);
        assert!(is_solved(&l, &v));
    }
}
