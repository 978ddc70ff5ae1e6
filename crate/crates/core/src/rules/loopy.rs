//! Loopy (slitherlink): draw a single closed loop along grid edges so that
//! every numbered face has that many sides on the loop.
//!
//! Decision nodes are grid edges: all horizontal edges row-major, then all
//! vertical edges row-major.

use super::Violations;
use crate::instance::{Clues, Layout};
use crate::puzzle::GridSpec;

pub const UNDECIDED: u8 = 0;
pub const LINE: u8 = 1;
pub const NO_LINE: u8 = 2;

/// Index arithmetic for edges, vertices and faces of a `w x h` face grid.
#[derive(Clone, Copy, Debug)]
pub struct Geometry {
    pub w: usize,
    pub h: usize,
}

impl Geometry {
    pub fn new(grid: GridSpec) -> Self {
        Geometry { w: grid.width, h: grid.height }
    }

    pub fn edge_count(&self) -> usize {
        2 * self.w * self.h + self.w + self.h
    }

    fn horizontal_count(&self) -> usize {
        (self.h + 1) * self.w
    }

    pub fn vertex_count(&self) -> usize {
        (self.h + 1) * (self.w + 1)
    }

    /// Edge along the top of vertex row `r`, from column `c` to `c + 1`.
    pub fn horizontal(&self, r: usize, c: usize) -> usize {
        r * self.w + c
    }

    /// Edge from vertex `(r, c)` down to `(r + 1, c)`.
    pub fn vertical(&self, r: usize, c: usize) -> usize {
        self.horizontal_count() + r * (self.w + 1) + c
    }

    pub fn is_horizontal(&self, e: usize) -> bool {
        e < self.horizontal_count()
    }

    pub fn vertex(&self, r: usize, c: usize) -> usize {
        r * (self.w + 1) + c
    }

    pub fn vertex_coords(&self, v: usize) -> (usize, usize) {
        (v / (self.w + 1), v % (self.w + 1))
    }

    /// Midpoint of edge `e` in doubled coordinates `(2r, 2c)`.
    pub fn edge_midpoint2(&self, e: usize) -> (isize, isize) {
        if self.is_horizontal(e) {
            let (r, c) = (e / self.w, e % self.w);
            (2 * r as isize, 2 * c as isize + 1)
        } else {
            let k = e - self.horizontal_count();
            let (r, c) = (k / (self.w + 1), k % (self.w + 1));
            (2 * r as isize + 1, 2 * c as isize)
        }
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        if self.is_horizontal(e) {
            let (r, c) = (e / self.w, e % self.w);
            (self.vertex(r, c), self.vertex(r, c + 1))
        } else {
            let k = e - self.horizontal_count();
            let (r, c) = (k / (self.w + 1), k % (self.w + 1));
            (self.vertex(r, c), self.vertex(r + 1, c))
        }
    }

    /// Edges incident to vertex `v` (2 to 4 of them).
    pub fn vertex_edges(&self, v: usize) -> Vec<usize> {
        let (r, c) = self.vertex_coords(v);
        let mut out = Vec::with_capacity(4);
        if r > 0 {
            out.push(self.vertical(r - 1, c));
        }
        if c < self.w {
            out.push(self.horizontal(r, c));
        }
        if r < self.h {
            out.push(self.vertical(r, c));
        }
        if c > 0 {
            out.push(self.horizontal(r, c - 1));
        }
        out
    }

    /// Top, right, bottom, left sides of face `f` (row-major).
    pub fn face_edges(&self, f: usize) -> [usize; 4] {
        let (r, c) = (f / self.w, f % self.w);
        [
            self.horizontal(r, c),
            self.vertical(r, c + 1),
            self.horizontal(r + 1, c),
            self.vertical(r, c),
        ]
    }
}

pub(crate) fn faces(layout: &Layout) -> &[Option<u8>] {
    match &layout.clues {
        Clues::Loopy { faces } => faces,
        _ => unreachable!("loopy rules on a {} layout", layout.kind),
    }
}

/// Lines through a vertex of degree above two are flagged; a face meta-node
/// is flagged when its drawn sides exceed the clue or can no longer reach it.
pub fn violations(layout: &Layout, values: &[u8]) -> Violations {
    let geo = Geometry::new(layout.grid);
    let mut out = Violations::clear(values.len(), layout.grid.cells());
    let mut degree = vec![0u8; geo.vertex_count()];
    for e in (0..values.len()).filter(|&e| values[e] == LINE) {
        let (a, b) = geo.endpoints(e);
        degree[a] += 1;
        degree[b] += 1;
    }
    for e in (0..values.len()).filter(|&e| values[e] == LINE) {
        let (a, b) = geo.endpoints(e);
        if degree[a] > 2 || degree[b] > 2 {
            out.decision[e] = 1;
        }
    }
    for (f, clue) in faces(layout).iter().enumerate() {
        if let Some(c) = *clue {
            let sides = geo.face_edges(f);
            let lines = sides.iter().filter(|&&e| values[e] == LINE).count() as u8;
            let open = sides.iter().filter(|&&e| values[e] == UNDECIDED).count() as u8;
            if lines > c || lines + open < c {
                out.meta[f] = 1;
            }
        }
    }
    out
}

/// Whether the drawn lines form exactly one cycle (every vertex of degree 0
/// or 2, one connected component, at least one line).
pub fn single_loop(geo: &Geometry, values: &[u8]) -> bool {
    let mut degree = vec![0u8; geo.vertex_count()];
    let mut adj = vec![Vec::new(); geo.vertex_count()];
    let mut lines = 0;
    for e in (0..values.len()).filter(|&e| values[e] == LINE) {
        let (a, b) = geo.endpoints(e);
        degree[a] += 1;
        degree[b] += 1;
        adj[a].push(b);
        adj[b].push(a);
        lines += 1;
    }
    if lines == 0 || degree.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let start = degree.iter().position(|&d| d == 2).unwrap_or(0);
    let (mut prev, mut cur, mut walked) = (start, adj[start][0], 1);
    while cur != start {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        walked += 1;
    }
    walked == lines
}

pub fn is_solved(layout: &Layout, values: &[u8]) -> bool {
    let geo = Geometry::new(layout.grid);
    values.iter().all(|&v| v != UNDECIDED)
        && faces(layout).iter().enumerate().all(|(f, clue)| {
            clue.is_none_or(|c| {
                geo.face_edges(f).iter().filter(|&&e| values[e] == LINE).count() as u8 == c
            })
        })
        && single_loop(&geo, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_counts() {
        let geo = Geometry::new(GridSpec::new(3, 2));
        assert_eq!(geo.edge_count(), 2 * 6 + 3 + 2);
        let mut seen = vec![0; geo.edge_count()];
        for v in 0..geo.vertex_count() {
            for e in geo.vertex_edges(v) {
                seen[e] += 1;
                let (a, b) = geo.endpoints(e);
                assert!(a == v || b == v);
            }
        }
        assert!(seen.iter().all(|&s| s == 2));
    }

    #[test]
    fn unit_square_is_a_loop() {
        let geo = Geometry::new(GridSpec::square(2));
        let mut v = vec![NO_LINE; geo.edge_count()];
        for e in geo.face_edges(0) {
            v[e] = LINE;
        }
        assert!(single_loop(&geo, &v));
        for e in geo.face_edges(3) {
            v[e] = LINE;
        }
        assert!(!single_loop(&geo, &v));
    }
}
