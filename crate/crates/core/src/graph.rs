//! Graph observations: decision nodes first (in canonical order), then
//! meta-nodes, with directed typed edges and fixed-width feature rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Clues, Layout};
use crate::puzzle::{Dir, GridSpec, PuzzleKind};
use crate::rules::loopy::{self, Geometry};
use crate::rules::{lightup, mosaic, net, tents, unruly, PuzzleState};

/// Edge label; the discriminant is the position of the 1 in the edge's
/// one-hot feature, and is also its serialized form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum EdgeDir {
    N,
    S,
    E,
    W,
    NE,
    NW,
    SE,
    SW,
    CellToMeta,
    MetaToCell,
}

impl EdgeDir {
    pub const COUNT: usize = 10;

    pub const ALL: [EdgeDir; Self::COUNT] = [
        EdgeDir::N,
        EdgeDir::S,
        EdgeDir::E,
        EdgeDir::W,
        EdgeDir::NE,
        EdgeDir::NW,
        EdgeDir::SE,
        EdgeDir::SW,
        EdgeDir::CellToMeta,
        EdgeDir::MetaToCell,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn one_hot(self) -> [f32; Self::COUNT] {
        let mut v = [0.0; Self::COUNT];
        v[self.index()] = 1.0;
        v
    }

    /// Label of a step by `(dr, dc)` (signs only).
    pub fn from_delta(dr: isize, dc: isize) -> Option<EdgeDir> {
        Some(match (dr.signum(), dc.signum()) {
            (-1, 0) => EdgeDir::N,
            (1, 0) => EdgeDir::S,
            (0, 1) => EdgeDir::E,
            (0, -1) => EdgeDir::W,
            (-1, 1) => EdgeDir::NE,
            (-1, -1) => EdgeDir::NW,
            (1, 1) => EdgeDir::SE,
            (1, -1) => EdgeDir::SW,
            _ => return None,
        })
    }
}

impl From<EdgeDir> for u8 {
    fn from(d: EdgeDir) -> u8 {
        d as u8
    }
}

impl TryFrom<u8> for EdgeDir {
    type Error = String;

    fn try_from(i: u8) -> std::result::Result<Self, String> {
        EdgeDir::ALL.get(i as usize).copied().ok_or_else(|| format!("edge direction {i} out of range"))
    }
}

/// The static part of an observation: everything that does not change while
/// an episode is played.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub decision_nodes: usize,
    pub meta_nodes: usize,
    /// Directed `(source, target)` pairs.
    pub edges: Vec<[u32; 2]>,
    pub edge_dirs: Vec<EdgeDir>,
}

impl Topology {
    pub fn node_count(&self) -> usize {
        self.decision_nodes + self.meta_nodes
    }

    /// `true` for meta-nodes.
    pub fn meta_mask(&self) -> Vec<bool> {
        (0..self.node_count()).map(|i| i >= self.decision_nodes).collect()
    }

    /// Edge features, one 10-wide one-hot row per edge.
    pub fn edge_features(&self) -> Vec<[f32; EdgeDir::COUNT]> {
        self.edge_dirs.iter().map(|d| d.one_hot()).collect()
    }
}

/// Node and directed-edge counts from the closed forms (not from building
/// the graph).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologySpec {
    pub decision_nodes: usize,
    pub meta_nodes: usize,
    pub directed_edges: usize,
}

impl TopologySpec {
    pub fn of(kind: PuzzleKind, grid: GridSpec) -> TopologySpec {
        let (w, h) = (grid.width, grid.height);
        let cells = w * h;
        let orth = w * (h - 1) + h * (w - 1);
        let diag = 2 * (w - 1) * (h - 1);
        let (decision, meta, undirected) = match kind {
            PuzzleKind::Net | PuzzleKind::Lightup => (cells, 0, orth),
            PuzzleKind::Mosaic => (cells, 0, orth + diag),
            PuzzleKind::Tents | PuzzleKind::Unruly => (cells, w + h, orth + 2 * cells),
            PuzzleKind::Loopy => {
                // grid-edges meeting at a vertex: corners join 2, border
                // vertices 3, inner vertices 4
                let border = 2 * (w - 1) + 2 * (h - 1);
                let inner = (w - 1) * (h - 1);
                let pairs = 4 + 3 * border + 6 * inner;
                (2 * cells + w + h, cells, pairs + 4 * cells)
            }
        };
        TopologySpec { decision_nodes: decision, meta_nodes: meta, directed_edges: 2 * undirected }
    }
}

pub fn topology(layout: &Layout) -> Topology {
    let kind = layout.kind;
    let g = layout.grid;
    let decision = layout.decision_count();
    let meta = kind.meta_count(g);
    let mut edges = Vec::new();
    let mut dirs = Vec::new();
    let mut link = |a: usize, b: usize, d: EdgeDir| {
        edges.push([a as u32, b as u32]);
        dirs.push(d);
    };
    match kind {
        PuzzleKind::Loopy => {
            let geo = Geometry::new(g);
            for e in 0..decision {
                let (r, c) = geo.edge_midpoint2(e);
                let (a, b) = geo.endpoints(e);
                for v in [a, b] {
                    for f in geo.vertex_edges(v).into_iter().filter(|&f| f != e) {
                        let (r2, c2) = geo.edge_midpoint2(f);
                        link(e, f, EdgeDir::from_delta(r2 - r, c2 - c).expect("distinct midpoints"));
                    }
                }
            }
            for f in 0..g.cells() {
                for e in geo.face_edges(f) {
                    link(e, decision + f, EdgeDir::CellToMeta);
                    link(decision + f, e, EdgeDir::MetaToCell);
                }
            }
        }
        _ => {
            let diagonal = kind == PuzzleKind::Mosaic;
            for i in 0..g.cells() {
                let (r, c) = g.coords(i);
                for j in g.king(i) {
                    let (r2, c2) = g.coords(j);
                    let (dr, dc) = (r2 as isize - r as isize, c2 as isize - c as isize);
                    if diagonal || dr == 0 || dc == 0 {
                        link(i, j, EdgeDir::from_delta(dr, dc).expect("neighbour"));
                    }
                }
            }
            if meta > 0 {
                for i in 0..g.cells() {
                    let (r, c) = g.coords(i);
                    for m in [decision + r, decision + g.height + c] {
                        link(i, m, EdgeDir::CellToMeta);
                        link(m, i, EdgeDir::MetaToCell);
                    }
                }
            }
        }
    }
    Topology { decision_nodes: decision, meta_nodes: meta, edges, edge_dirs: dirs }
}

/// Where a clue sits, which fixes its largest possible value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClueSite {
    /// A cell or face clue (Loopy, Mosaic, Lightup).
    Cell,
    /// A Tents row count.
    Row,
    /// A Tents column count.
    Column,
}

/// `clue / max`: Loopy and Lightup over 4, Mosaic over 9, Tents rows over
/// `ceil(w/2)` and columns over `ceil(h/2)`.
pub fn normalized_clue(kind: PuzzleKind, grid: GridSpec, site: ClueSite, clue: u8) -> Result<f32> {
    let max = match (kind, site) {
        (PuzzleKind::Loopy | PuzzleKind::Lightup, ClueSite::Cell) => 4,
        (PuzzleKind::Mosaic, ClueSite::Cell) => 9,
        (PuzzleKind::Tents, ClueSite::Row) => grid.width.div_ceil(2),
        (PuzzleKind::Tents, ClueSite::Column) => grid.height.div_ceil(2),
        _ => return Err(Error::contract(format!("{kind} has no {site:?} clues"))),
    };
    if usize::from(clue) > max {
        return Err(Error::contract(format!("{kind} clue {clue} exceeds {max}")));
    }
    Ok(f32::from(clue) / max as f32)
}

/// Per Net cell: reachable from the source through facing connectors.
pub fn connected_component_from_source(state: &PuzzleState) -> Result<Vec<bool>> {
    net::connected_from_source(state.layout(), state.values())
}

/// Agent-facing view of a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphObservation {
    pub kind: PuzzleKind,
    pub grid: GridSpec,
    pub topology: Topology,
    pub feature_width: usize,
    /// `node_count * feature_width` values, row-major.
    pub features: Vec<f32>,
    pub num_actions: usize,
}

impl GraphObservation {
    pub fn node_count(&self) -> usize {
        self.topology.node_count()
    }

    pub fn row(&self, node: usize) -> &[f32] {
        &self.features[node * self.feature_width..(node + 1) * self.feature_width]
    }
}

pub fn encode(state: &PuzzleState) -> GraphObservation {
    let layout = state.layout();
    GraphObservation {
        kind: layout.kind,
        grid: layout.grid,
        topology: topology(layout),
        feature_width: layout.kind.feature_width(),
        features: node_features(state),
        num_actions: layout.kind.num_actions(),
    }
}

fn norm(kind: PuzzleKind, grid: GridSpec, site: ClueSite, clue: u8) -> f32 {
    normalized_clue(kind, grid, site, clue).expect("clues are validated on parse")
}

/// Feature rows for every node (decision then meta), flattened.
pub fn node_features(state: &PuzzleState) -> Vec<f32> {
    let layout = state.layout();
    let kind = layout.kind;
    let g = layout.grid;
    let v = state.values();
    let viol = state.violations();
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let mut out: Vec<f32> = Vec::with_capacity((v.len() + kind.meta_count(g)) * kind.feature_width());
    match kind {
        PuzzleKind::Net => {
            let (_, source) = layout.net_tiles();
            let conn = net::connected_from_source(layout, v).expect("net layout");
            for i in 0..v.len() {
                let m = net::connectors(layout, v, i);
                let has = |d: Dir| flag(m & d.bit() != 0);
                out.extend([has(Dir::N), has(Dir::W), has(Dir::S), has(Dir::E)]);
                out.extend([flag(i == source), flag(conn[i])]);
            }
        }
        PuzzleKind::Loopy => {
            let Clues::Loopy { faces } = &layout.clues else { unreachable!() };
            for (i, &x) in v.iter().enumerate() {
                out.extend([
                    flag(x == loopy::UNDECIDED),
                    flag(x == loopy::NO_LINE),
                    flag(x == loopy::LINE),
                    flag(viol.decision[i] != 0),
                    0.0,
                    0.0,
                ]);
            }
            for (f, clue) in faces.iter().enumerate() {
                let number = clue.map_or(-1.0, |c| norm(kind, g, ClueSite::Cell, c));
                out.extend([0.0, 0.0, 0.0, flag(viol.meta[f] != 0), 1.0, number]);
            }
        }
        PuzzleKind::Mosaic => {
            let numbers = mosaic::numbers(layout);
            for (i, &x) in v.iter().enumerate() {
                out.extend([
                    flag(x == mosaic::UNMARKED),
                    flag(x == mosaic::MARKED),
                    flag(x == mosaic::BLANK),
                    flag(numbers[i].is_some()),
                    flag(mosaic::clue_satisfied(layout, v, i)),
                    flag(viol.decision[i] != 0),
                    numbers[i].map_or(0.0, |c| norm(kind, g, ClueSite::Cell, c)),
                ]);
            }
        }
        PuzzleKind::Tents => {
            for (i, &x) in v.iter().enumerate() {
                out.extend([
                    flag(x == tents::EMPTY),
                    flag(x == tents::GRASS),
                    flag(x == tents::TENT),
                    flag(x == tents::TREE),
                    flag(viol.decision[i] != 0),
                    0.0,
                    0.0,
                ]);
            }
            let (rows, cols) = tents::line_clues(layout);
            let sites = rows
                .iter()
                .map(|&c| (ClueSite::Row, c))
                .chain(cols.iter().map(|&c| (ClueSite::Column, c)));
            for (m, (site, clue)) in sites.enumerate() {
                out.extend([0.0, 0.0, 0.0, 0.0, flag(viol.meta[m] != 0), 1.0, norm(kind, g, site, clue)]);
            }
        }
        PuzzleKind::Lightup => {
            let numbers = lightup::numbers(layout);
            let lit = lightup::lit(layout, v);
            for (i, &x) in v.iter().enumerate() {
                let black = lightup::is_black(layout, i);
                let bulb = !black && x == lightup::BULB;
                out.extend([
                    flag(bulb),
                    flag(!black && !bulb && !lit[i]),
                    flag(!black && !bulb && lit[i]),
                    flag(black && numbers[i].is_none()),
                    flag(black && numbers[i].is_some()),
                    flag(viol.decision[i] != 0),
                    numbers[i].map_or(0.0, |c| norm(kind, g, ClueSite::Cell, c)),
                ]);
            }
        }
        PuzzleKind::Unruly => {
            for (i, &x) in v.iter().enumerate() {
                let f = viol.decision[i];
                out.extend([
                    flag(x == unruly::EMPTY),
                    flag(x == unruly::WHITE),
                    flag(x == unruly::BLACK),
                    flag(layout.is_fixed(i)),
                    0.0,
                    flag(f & unruly::HORIZONTAL != 0),
                    flag(f & unruly::VERTICAL != 0),
                    flag(f & unruly::NUMBER != 0),
                ]);
            }
            for &f in &viol.meta {
                out.extend([0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, flag(f & unruly::NUMBER != 0)]);
            }
        }
    }
    out
}

/// Indices of the one-hot feature group of a kind (decision rows only).
pub fn one_hot_group(kind: PuzzleKind) -> std::ops::Range<usize> {
    match kind {
        PuzzleKind::Net => 0..0,
        PuzzleKind::Loopy | PuzzleKind::Mosaic | PuzzleKind::Unruly => 0..3,
        PuzzleKind::Tents => 0..4,
        PuzzleKind::Lightup => 0..5,
    }
}
