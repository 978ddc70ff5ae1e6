use super::{restrict, Domains, Model};
use crate::instance::Layout;
use crate::rules::loopy::{faces, Geometry, LINE, NO_LINE};

const L: u8 = 1 << LINE;
const N: u8 = 1 << NO_LINE;
const OPEN: u8 = L | N;

pub(crate) struct LoopyModel<'a> {
    layout: &'a Layout,
    vertex_edges: Vec<Vec<usize>>,
    ends: Vec<(usize, usize)>,
    clues: Vec<(u8, [usize; 4])>,
    /// Faces each edge borders, paired with their clue.
    edge_clues: Vec<Vec<usize>>,
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

impl<'a> LoopyModel<'a> {
    pub fn new(layout: &'a Layout) -> Self {
        let geo = Geometry::new(layout.grid);
        let clues: Vec<(u8, [usize; 4])> = faces(layout)
            .iter()
            .enumerate()
            .filter_map(|(f, c)| c.map(|c| (c, geo.face_edges(f))))
            .collect();
        let mut edge_clues = vec![Vec::new(); geo.edge_count()];
        for (k, (_, sides)) in clues.iter().enumerate() {
            for &e in sides {
                edge_clues[e].push(k);
            }
        }
        LoopyModel {
            layout,
            vertex_edges: (0..geo.vertex_count()).map(|v| geo.vertex_edges(v)).collect(),
            ends: (0..geo.edge_count()).map(|e| geo.endpoints(e)).collect(),
            clues,
            edge_clues,
        }
    }

    fn local(&self, d: &mut [u8]) -> Option<bool> {
        let mut changed = false;
        for (clue, sides) in &self.clues {
            let lines = sides.iter().filter(|&&e| d[e] == L).count() as u8;
            let open = sides.iter().filter(|&&e| d[e] == OPEN).count() as u8;
            if lines > *clue || lines + open < *clue {
                return None;
            }
            if open > 0 && (lines == *clue || lines + open == *clue) {
                let keep = if lines == *clue { N } else { L };
                for &e in sides {
                    if d[e] == OPEN {
                        changed |= restrict(d, e, keep);
                    }
                }
            }
        }
        for edges in &self.vertex_edges {
            let lines = edges.iter().filter(|&&e| d[e] == L).count();
            let open = edges.iter().filter(|&&e| d[e] == OPEN).count();
            let keep = match (lines, open) {
                (3.., _) | (1, 0) => return None,
                (_, 0) => continue,
                (2, _) | (0, 1) => N,
                (1, 1) => L,
                _ => continue,
            };
            for &e in edges {
                if d[e] == OPEN {
                    changed |= restrict(d, e, keep);
                }
            }
        }
        Some(changed)
    }

    /// Premature cycles are contradictions; an edge that would close a cycle
    /// early is ruled out.
    fn global(&self, d: &mut [u8]) -> Option<bool> {
        let mut parent: Vec<usize> = (0..self.vertex_edges.len()).collect();
        let mut cycle = false;
        let mut line_edges = Vec::new();
        for e in (0..d.len()).filter(|&e| d[e] == L) {
            let (a, b) = self.ends[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                cycle = true;
            } else {
                parent[ra] = rb;
            }
            line_edges.push(e);
        }
        if line_edges.is_empty() {
            return Some(false);
        }
        let root = find(&mut parent, self.ends[line_edges[0]].0);
        let components = {
            let mut roots: Vec<usize> =
                line_edges.iter().map(|&e| find(&mut parent, self.ends[e].0)).collect();
            roots.sort_unstable();
            roots.dedup();
            roots.len()
        };
        let mut changed = false;
        if cycle {
            if components > 1 {
                return None;
            }
            for e in 0..d.len() {
                if d[e] == OPEN {
                    changed |= restrict(d, e, N);
                }
            }
            return Some(changed);
        }
        for e in 0..d.len() {
            if d[e] != OPEN {
                continue;
            }
            let (a, b) = self.ends[e];
            let ra = find(&mut parent, a);
            if ra != find(&mut parent, b) {
                continue;
            }
            // closing here finishes the loop: only legal if it is the whole answer
            let completes = components == 1
                && ra == root
                && self.clues.iter().all(|(clue, sides)| {
                    let lines = sides.iter().filter(|&&s| d[s] == L || s == e).count() as u8;
                    lines == *clue
                });
            if !completes {
                changed |= restrict(d, e, N);
            }
        }
        Some(changed)
    }
}

impl Model for LoopyModel<'_> {
    fn layout(&self) -> &Layout {
        self.layout
    }

    fn domains(&self) -> Domains {
        vec![OPEN; self.ends.len()]
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
        for edges in &self.vertex_edges {
            if edges.iter().filter(|&&e| d[e] == L).count() == 1 {
                if let Some(&e) = edges.iter().find(|&&e| d[e] == OPEN) {
                    return Some(e);
                }
            }
        }
        let open = |e: &usize| d[*e] == OPEN;
        (0..d.len())
            .filter(open)
            .max_by_key(|&e| (self.edge_clues[e].len(), std::cmp::Reverse(e)))
    }
}
