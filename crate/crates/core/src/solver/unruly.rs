use super::{Domains, Model};
use crate::instance::Layout;
use crate::rules::unruly::{BLACK, WHITE};

const W: u8 = 1 << WHITE;
const B: u8 = 1 << BLACK;

pub(crate) struct UnrulyModel<'a> {
    layout: &'a Layout,
    lines: Vec<Vec<usize>>,
}

impl<'a> UnrulyModel<'a> {
    pub fn new(layout: &'a Layout) -> Self {
        let g = layout.grid;
        let mut lines: Vec<Vec<usize>> = (0..g.height)
            .map(|r| (0..g.width).map(|c| g.index(r, c)).collect())
            .collect();
        lines.extend((0..g.width).map(|c| (0..g.height).map(|r| g.index(r, c)).collect()));
        UnrulyModel { layout, lines }
    }
}

impl UnrulyModel<'_> {
    fn lines_of(&self, i: usize) -> [usize; 2] {
        let g = self.layout.grid;
        let (r, c) = g.coords(i);
        [r, g.height + c]
    }

    /// Runs the line rules to a fixpoint starting from the given lines.
    fn settle(&self, d: &mut [u8], mut work: Vec<usize>) -> bool {
        let mut queued = vec![false; self.lines.len()];
        for &l in &work {
            queued[l] = true;
        }
        let mut changed = Vec::new();
        while let Some(l) = work.pop() {
            queued[l] = false;
            if !self.line(&self.lines[l], d, &mut changed) {
                return false;
            }
            for i in changed.drain(..) {
                for k in self.lines_of(i) {
                    if !queued[k] {
                        queued[k] = true;
                        work.push(k);
                    }
                }
            }
        }
        true
    }

    /// Triple and balance rules on one line; pushes narrowed cells.
    fn line(&self, line: &[usize], d: &mut [u8], changed: &mut Vec<usize>) -> bool {
        for k in 0..line.len().saturating_sub(2) {
            let win = &line[k..k + 3];
            for (colour, other) in [(W, B), (B, W)] {
                let same = win.iter().filter(|&&i| d[i] == colour).count();
                if same == 3 {
                    return false;
                }
                if same == 2 {
                    for &i in win {
                        if d[i] == W | B {
                            d[i] = other;
                            changed.push(i);
                        }
                    }
                }
            }
        }
        let half = line.len() / 2;
        let whites = line.iter().filter(|&&i| d[i] == W).count();
        let blacks = line.iter().filter(|&&i| d[i] == B).count();
        if whites > half || blacks > half {
            return false;
        }
        if whites == half || blacks == half {
            let fill = if whites == half { B } else { W };
            for &i in line {
                if d[i] == W | B {
                    d[i] = fill;
                    changed.push(i);
                }
            }
        }
        true
    }
}

impl Model for UnrulyModel<'_> {
    fn layout(&self) -> &Layout {
        self.layout
    }

    fn domains(&self) -> Domains {
        self.layout
            .fixed
            .iter()
            .map(|f| f.map_or(W | B, |v| 1 << v))
            .collect()
    }

    fn propagate(&self, d: &mut [u8]) -> bool {
        self.settle(d, (0..self.lines.len()).collect())
    }

    /// Undecided cell whose row and column are the most filled in.
    fn branch(&self, d: &[u8]) -> Option<usize> {
        let g = self.layout.grid;
        let open = |line: &[usize]| line.iter().filter(|&&i| d[i] == W | B).count();
        let rows: Vec<usize> = self.lines[..g.height].iter().map(|l| open(l)).collect();
        let cols: Vec<usize> = self.lines[g.height..].iter().map(|l| open(l)).collect();
        (0..d.len())
            .filter(|&i| d[i] == W | B)
            .min_by_key(|&i| {
                let (r, c) = g.coords(i);
                rows[r] + cols[c]
            })
    }
}
