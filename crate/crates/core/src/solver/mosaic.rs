use super::{restrict, Domains, Model};
use crate::instance::Layout;
use crate::rules::mosaic::{numbers, BLANK, MARKED};

const B: u8 = 1 << MARKED;
const W: u8 = 1 << BLANK;

pub(crate) struct MosaicModel<'a> {
    layout: &'a Layout,
    clues: Vec<(u8, Vec<usize>)>,
}

impl<'a> MosaicModel<'a> {
    pub fn new(layout: &'a Layout) -> Self {
        let g = layout.grid;
        let clues = numbers(layout)
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (c, g.block(i).collect())))
            .collect();
        MosaicModel { layout, clues }
    }
}

impl Model for MosaicModel<'_> {
    fn layout(&self) -> &Layout {
        self.layout
    }

    fn domains(&self) -> Domains {
        vec![B | W; self.layout.grid.cells()]
    }

    fn propagate(&self, d: &mut [u8]) -> bool {
        loop {
            let mut changed = false;
            for (clue, cells) in &self.clues {
                let black = cells.iter().filter(|&&i| d[i] == B).count() as u8;
                let open = cells.iter().filter(|&&i| d[i] == B | W).count() as u8;
                if black > *clue || black + open < *clue {
                    return false;
                }
                if open > 0 && (black == *clue || black + open == *clue) {
                    let keep = if black == *clue { W } else { B };
                    for &i in cells {
                        if d[i] == B | W {
                            changed |= restrict(d, i, keep);
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}
