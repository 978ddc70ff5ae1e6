use super::{remove, restrict, Domains, Model};
use crate::instance::Layout;
use crate::rules::max_matching;
use crate::rules::tents::{line_clues, GRASS, TENT, TREE};

const G: u8 = 1 << GRASS;
const T: u8 = 1 << TENT;

pub(crate) struct TentsModel<'a> {
    layout: &'a Layout,
    /// Cells of each row, then each column.
    lines: Vec<Vec<usize>>,
    clues: Vec<u8>,
    trees: Vec<usize>,
    /// Orthogonal non-tree neighbours of each tree.
    tree_slots: Vec<Vec<usize>>,
    king: Vec<Vec<usize>>,
}

impl<'a> TentsModel<'a> {
    pub fn new(layout: &'a Layout) -> Self {
        let g = layout.grid;
        let (rows, cols) = line_clues(layout);
        let mut lines: Vec<Vec<usize>> = (0..g.height)
            .map(|r| (0..g.width).map(|c| g.index(r, c)).collect())
            .collect();
        lines.extend((0..g.width).map(|c| (0..g.height).map(|r| g.index(r, c)).collect()));
        let is_tree = |i: usize| layout.fixed[i] == Some(TREE);
        let trees: Vec<usize> = (0..g.cells()).filter(|&i| is_tree(i)).collect();
        let tree_slots = trees
            .iter()
            .map(|&t| g.orthogonal(t).map(|(_, j)| j).filter(|&j| !is_tree(j)).collect())
            .collect();
        TentsModel {
            layout,
            lines,
            clues: rows.iter().chain(cols).copied().collect(),
            trees,
            tree_slots,
            king: (0..g.cells()).map(|i| g.king(i).collect()).collect(),
        }
    }

    fn matching_possible(&self, d: &[u8]) -> bool {
        // every tree needs its own candidate cell
        let mut slot_of = vec![usize::MAX; d.len()];
        let mut n = 0;
        for (i, &m) in d.iter().enumerate() {
            if m & T != 0 {
                slot_of[i] = n;
                n += 1;
            }
        }
        let adj: Vec<Vec<usize>> = self
            .tree_slots
            .iter()
            .map(|s| s.iter().filter(|&&j| d[j] & T != 0).map(|&j| slot_of[j]).collect())
            .collect();
        if max_matching(&adj, n) != self.trees.len() {
            return false;
        }
        // every placed tent needs its own tree
        let tents: Vec<usize> = (0..d.len()).filter(|&i| d[i] == T).collect();
        let mut tree_of = vec![usize::MAX; d.len()];
        for (k, &t) in self.trees.iter().enumerate() {
            tree_of[t] = k;
        }
        let g = self.layout.grid;
        let adj: Vec<Vec<usize>> = tents
            .iter()
            .map(|&t| {
                g.orthogonal(t)
                    .map(|(_, j)| tree_of[j])
                    .filter(|&k| k != usize::MAX)
                    .collect()
            })
            .collect();
        max_matching(&adj, self.trees.len()) == tents.len()
    }
}

impl Model for TentsModel<'_> {
    fn layout(&self) -> &Layout {
        self.layout
    }

    fn domains(&self) -> Domains {
        let mut d = vec![G; self.layout.grid.cells()];
        for &t in &self.trees {
            d[t] = 1 << TREE;
        }
        for slots in &self.tree_slots {
            for &j in slots {
                d[j] = G | T;
            }
        }
        d
    }

    fn propagate(&self, d: &mut [u8]) -> bool {
        loop {
            let mut changed = false;
            for i in 0..d.len() {
                if d[i] == T {
                    for &j in &self.king[i] {
                        changed |= remove(d, j, T);
                        if d[j] == 0 {
                            return false;
                        }
                    }
                }
            }
            for (cells, &clue) in self.lines.iter().zip(&self.clues) {
                let tents = cells.iter().filter(|&&i| d[i] == T).count() as u8;
                let open = cells.iter().filter(|&&i| d[i] == G | T).count() as u8;
                if tents > clue || tents + open < clue {
                    return false;
                }
                if open > 0 && (tents == clue || tents + open == clue) {
                    let keep = if tents == clue { G } else { T };
                    for &i in cells {
                        if d[i] == G | T {
                            changed |= restrict(d, i, keep);
                        }
                    }
                }
            }
            for slots in &self.tree_slots {
                let mut cands = slots.iter().filter(|&&j| d[j] & T != 0);
                match (cands.next(), cands.next()) {
                    (None, _) => return false,
                    (Some(&j), None) => changed |= restrict(d, j, T),
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        self.matching_possible(d)
    }
}
