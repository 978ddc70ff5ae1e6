use super::{Domains, Model};
use crate::instance::Layout;
use crate::puzzle::Dir;
use crate::rules::net::{period, rotate};

pub(crate) struct NetModel<'a> {
    layout: &'a Layout,
    /// Connector mask per cell per orientation value.
    conn: Vec<[u8; 4]>,
    periods: Vec<u8>,
    /// Neighbours in N, E, S, W order.
    nbr: Vec<[Option<usize>; 4]>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Returns `false` if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

impl<'a> NetModel<'a> {
    pub fn new(layout: &'a Layout) -> Self {
        let g = layout.grid;
        let (tiles, _) = layout.net_tiles();
        let conn = tiles.iter().map(|&t| [0, 1, 2, 3].map(|v| rotate(t, v))).collect();
        let periods = tiles.iter().map(|&t| period(t)).collect();
        let nbr = (0..g.cells()).map(|i| Dir::ALL.map(|d| g.step(i, d))).collect();
        NetModel { layout, conn, periods, nbr }
    }

    /// Connectors present in some / in every remaining orientation.
    fn masks(&self, i: usize, dom: u8) -> (u8, u8) {
        (0..self.periods[i])
            .filter(|v| dom & (1 << v) != 0)
            .fold((0, 0xf), |(may, must), v| {
                let c = self.conn[i][v as usize];
                (may | c, must & c)
            })
    }

    /// Keeps only orientations whose connector at `bit` equals `present`.
    fn require(&self, d: &mut [u8], i: usize, bit: u8, present: bool) -> bool {
        let before = d[i];
        for v in 0..self.periods[i] {
            if (self.conn[i][v as usize] & bit != 0) != present {
                d[i] &= !(1 << v);
            }
        }
        d[i] != before
    }

    fn local(&self, d: &mut [u8]) -> Option<bool> {
        let mut changed = false;
        for i in 0..d.len() {
            for (k, dir) in Dir::ALL.into_iter().enumerate() {
                let bit = dir.bit();
                let (may_i, must_i) = self.masks(i, d[i]);
                match self.nbr[i][k] {
                    None => {
                        if may_i & bit != 0 {
                            changed |= self.require(d, i, bit, false);
                        }
                    }
                    Some(j) => {
                        let opp = dir.opposite().bit();
                        let (may_j, must_j) = self.masks(j, d[j]);
                        let possible = may_i & bit != 0 && may_j & opp != 0;
                        let forced = must_i & bit != 0 || must_j & opp != 0;
                        if forced && !possible {
                            return None;
                        }
                        if !possible {
                            changed |= self.require(d, i, bit, false);
                            changed |= self.require(d, j, opp, false);
                        } else if forced {
                            changed |= self.require(d, i, bit, true);
                            changed |= self.require(d, j, opp, true);
                        }
                    }
                }
                if d[i] == 0 {
                    return None;
                }
            }
        }
        Some(changed)
    }

    /// Cycle and isolation reasoning over the links that are already certain.
    fn global(&self, d: &mut [u8]) -> Option<bool> {
        let n = d.len();
        let masks: Vec<(u8, u8)> = (0..n).map(|i| self.masks(i, d[i])).collect();
        let mut uf = UnionFind::new(n);
        let mut open = Vec::new();
        for i in 0..n {
            for (k, dir) in [(1, Dir::E), (2, Dir::S)] {
                let Some(j) = self.nbr[i][k] else { continue };
                let (bit, opp) = (dir.bit(), dir.opposite().bit());
                let definite = masks[i].1 & bit != 0 && masks[j].1 & opp != 0;
                let possible = masks[i].0 & bit != 0 && masks[j].0 & opp != 0;
                if definite {
                    if !uf.union(i, j) {
                        return None;
                    }
                } else if possible {
                    open.push((i, j, bit, opp));
                }
            }
        }
        let mut changed = false;
        let mut exits = vec![0usize; n];
        for &(i, j, bit, opp) in &open {
            let (ri, rj) = (uf.find(i), uf.find(j));
            if ri == rj {
                changed |= self.require(d, i, bit, false);
                changed |= self.require(d, j, opp, false);
                if d[i] == 0 || d[j] == 0 {
                    return None;
                }
            } else {
                exits[ri] += 1;
                exits[rj] += 1;
            }
        }
        if n > 1 {
            let mut size = vec![0usize; n];
            for i in 0..n {
                size[uf.find(i)] += 1;
            }
            if (0..n).any(|r| size[r] > 0 && size[r] < n && exits[r] == 0) {
                return None;
            }
        }
        Some(changed)
    }
}

impl Model for NetModel<'_> {
    fn layout(&self) -> &Layout {
        self.layout
    }

    fn domains(&self) -> Domains {
        self.periods.iter().map(|&p| ((1u16 << p) - 1) as u8).collect()
    }

    fn propagate(&self, d: &mut [u8]) -> bool {
        loop {
            match self.local(d) {
                None => return false,
                Some(true) => continue,
                Some(false) => {}
            }
            match self.global(d) {
                None => return false,
                Some(true) => continue,
                Some(false) => return true,
            }
        }
    }

    fn branch(&self, d: &[u8]) -> Option<usize> {
        (0..d.len())
            .filter(|&i| d[i].count_ones() > 1)
            .min_by_key(|&i| d[i].count_ones())
    }
}
