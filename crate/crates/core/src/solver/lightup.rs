use super::{restrict, Domains, Model};
use crate::instance::Layout;
use crate::rules::lightup::{is_black, numbers, segments, BULB, EMPTY};

const E: u8 = 1 << EMPTY;
const L: u8 = 1 << BULB;

pub(crate) struct LightupModel<'a> {
    layout: &'a Layout,
    segments: Vec<Vec<usize>>,
    /// Row and column segment of each open cell.
    seg_of: Vec<[usize; 2]>,
    clues: Vec<(u8, Vec<usize>)>,
}

impl<'a> LightupModel<'a> {
    pub fn new(layout: &'a Layout) -> Self {
        let g = layout.grid;
        let segments = segments(layout);
        let mut seg_of = vec![[usize::MAX; 2]; g.cells()];
        for (s, seg) in segments.iter().enumerate() {
            for &i in seg {
                let slot = usize::from(seg_of[i][0] != usize::MAX);
                seg_of[i][slot] = s;
            }
        }
        let clues = numbers(layout)
            .iter()
            .enumerate()
            .filter_map(|(i, n)| {
                n.map(|n| {
                    let open = g.orthogonal(i).map(|(_, j)| j).filter(|&j| !is_black(layout, j));
                    (n, open.collect())
                })
            })
            .collect();
        LightupModel { layout, segments, seg_of, clues }
    }
}

impl Model for LightupModel<'_> {
    fn layout(&self) -> &Layout {
        self.layout
    }

    fn domains(&self) -> Domains {
        (0..self.layout.grid.cells())
            .map(|i| if is_black(self.layout, i) { E } else { E | L })
            .collect()
    }

    fn propagate(&self, d: &mut [u8]) -> bool {
        let mut lit_seg = vec![false; self.segments.len()];
        loop {
            let mut changed = false;
            for (s, seg) in self.segments.iter().enumerate() {
                let bulbs = seg.iter().filter(|&&i| d[i] == L).count();
                if bulbs > 1 {
                    return false;
                }
                lit_seg[s] = bulbs == 1;
                if bulbs == 1 {
                    for &i in seg {
                        if d[i] == E | L {
                            changed |= restrict(d, i, E);
                        }
                    }
                }
            }
            for (n, cells) in &self.clues {
                let bulbs = cells.iter().filter(|&&i| d[i] == L).count() as u8;
                let open = cells.iter().filter(|&&i| d[i] == E | L).count() as u8;
                if bulbs > *n || bulbs + open < *n {
                    return false;
                }
                if open > 0 && (bulbs == *n || bulbs + open == *n) {
                    let keep = if bulbs == *n { E } else { L };
                    for &i in cells {
                        if d[i] == E | L {
                            changed |= restrict(d, i, keep);
                        }
                    }
                }
            }
            for i in 0..d.len() {
                let [a, b] = self.seg_of[i];
                if a == usize::MAX || lit_seg[a] || lit_seg[b] {
                    continue;
                }
                let mut cands = self.segments[a]
                    .iter()
                    .chain(self.segments[b].iter().filter(|&&j| j != i))
                    .filter(|&&j| d[j] & L != 0);
                match (cands.next(), cands.next()) {
                    (None, _) => return false,
                    (Some(&j), None) => changed |= restrict(d, j, L),
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }
}
