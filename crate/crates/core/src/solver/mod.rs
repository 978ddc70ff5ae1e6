//! Exact solver: constraint propagation plus depth-first backtracking.
//!
//! Each puzzle supplies a [`Model`] over per-node domains (a bit set of the
//! values a node may still take). The search is complete and deterministic:
//! nodes are branched in a fixed order and values are tried in ascending
//! order, unless a caller asks to try values away from a known solution
//! first.

mod lightup;
mod loopy;
mod mosaic;
mod net;
mod tents;
mod unruly;

use crate::error::{Error, Result};
use crate::instance::Layout;
use crate::puzzle::{PuzzleKind, StateSequence};

/// Per-node domain: bit `v` set means value `v` is still possible.
pub(crate) type Domains = Vec<u8>;

pub(crate) trait Model {
    fn layout(&self) -> &Layout;

    fn domains(&self) -> Domains;

    /// Narrows domains to a fixpoint. Returns `false` on contradiction.
    fn propagate(&self, d: &mut [u8]) -> bool;

    /// Node to branch on, or `None` when every domain is a singleton.
    fn branch(&self, d: &[u8]) -> Option<usize> {
        d.iter().position(|m| m.count_ones() > 1)
    }

    fn accept(&self, d: &[u8]) -> bool {
        crate::rules::is_solved(self.layout(), &values_of(d))
    }
}

pub(crate) fn values_of(d: &[u8]) -> StateSequence {
    d.iter().map(|m| m.trailing_zeros() as u8).collect()
}

/// Removes the bits in `mask` from `d[i]`; reports whether anything changed.
#[inline]
pub(crate) fn remove(d: &mut [u8], i: usize, mask: u8) -> bool {
    let before = d[i];
    d[i] &= !mask;
    d[i] != before
}

/// Restricts `d[i]` to `mask`; reports whether anything changed.
#[inline]
pub(crate) fn restrict(d: &mut [u8], i: usize, mask: u8) -> bool {
    let before = d[i];
    d[i] &= mask;
    d[i] != before
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Unique,
    Multiple,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    /// At most `cap` solutions, in discovery order.
    pub solutions: Vec<StateSequence>,
    /// Search nodes expanded.
    pub nodes: u64,
    pub verdict: Verdict,
}

/// Finds up to `cap` solutions of a layout (its stored solution, if any, is
/// not consulted). The verdict always reflects a search for at least two
/// solutions.
pub fn solve(layout: &Layout, cap: usize) -> Result<SolveResult> {
    if cap == 0 {
        return Err(Error::contract("solve needs cap >= 1"));
    }
    layout.kind.validate(layout.grid)?;
    let out = search(layout, &Options { cap: cap.max(2), ..Options::default() });
    let verdict = match out.solutions.len() {
        0 => Verdict::None,
        1 => Verdict::Unique,
        _ => Verdict::Multiple,
    };
    let mut solutions = out.solutions;
    solutions.truncate(cap);
    Ok(SolveResult { solutions, nodes: out.nodes, verdict })
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Options<'a> {
    pub cap: usize,
    /// Give up after this many nodes.
    pub node_limit: Option<u64>,
    /// Try values that differ from this sequence first.
    pub avoid: Option<&'a [u8]>,
    /// Restrict node `.0` to the value mask `.1` before searching.
    pub force: Option<(usize, u8)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Search {
    pub solutions: Vec<StateSequence>,
    pub nodes: u64,
    pub aborted: bool,
}

pub(crate) fn search(layout: &Layout, opts: &Options<'_>) -> Search {
    match layout.kind {
        PuzzleKind::Tents => run(&tents::TentsModel::new(layout), opts),
        PuzzleKind::Lightup => run(&lightup::LightupModel::new(layout), opts),
        PuzzleKind::Mosaic => run(&mosaic::MosaicModel::new(layout), opts),
        PuzzleKind::Loopy => run(&loopy::LoopyModel::new(layout), opts),
        PuzzleKind::Net => run(&net::NetModel::new(layout), opts),
        PuzzleKind::Unruly => run(&unruly::UnrulyModel::new(layout), opts),
    }
}

/// Whether the layout has exactly one solution, giving up (returning `None`)
/// past `node_limit`. `known` must be a solution of the layout.
pub(crate) fn unique_given(layout: &Layout, known: &[u8], node_limit: Option<u64>) -> Option<bool> {
    let out = search(layout, &Options { cap: 2, node_limit, avoid: Some(known), force: None });
    if out.aborted {
        None
    } else {
        Some(out.solutions.len() == 1)
    }
}

/// Returns a second solution different from `known`, if one exists within
/// the node budget. `Err(())` means the budget ran out.
pub(crate) fn other_solution(
    layout: &Layout,
    known: &[u8],
    node_limit: Option<u64>,
) -> std::result::Result<Option<StateSequence>, ()> {
    let out = search(layout, &Options { cap: 2, node_limit, avoid: Some(known), force: None });
    if let Some(s) = out.solutions.into_iter().find(|s| s.as_slice() != known) {
        return Ok(Some(s));
    }
    if out.aborted {
        Err(())
    } else {
        Ok(None)
    }
}

/// Whether some solution gives node `i` a value in `mask`; `None` when the
/// node budget ran out first.
pub(crate) fn satisfiable_with(
    layout: &Layout,
    i: usize,
    mask: u8,
    node_limit: Option<u64>,
) -> Option<bool> {
    let out = search(layout, &Options { cap: 1, node_limit, avoid: None, force: Some((i, mask)) });
    if !out.solutions.is_empty() {
        Some(true)
    } else if out.aborted {
        None
    } else {
        Some(false)
    }
}

fn run<M: Model>(model: &M, opts: &Options<'_>) -> Search {
    let mut st = Search { solutions: Vec::new(), nodes: 0, aborted: false };
    let mut d = model.domains();
    if let Some((i, mask)) = opts.force {
        d[i] &= mask;
    }
    dfs(model, d, opts, &mut st);
    st
}

fn dfs<M: Model>(model: &M, mut d: Domains, opts: &Options<'_>, st: &mut Search) {
    if st.solutions.len() >= opts.cap || st.aborted {
        return;
    }
    st.nodes += 1;
    if opts.node_limit.is_some_and(|lim| st.nodes > lim) {
        st.aborted = true;
        return;
    }
    if d.contains(&0) || !model.propagate(&mut d) {
        return;
    }
    let Some(var) = model.branch(&d) else {
        if model.accept(&d) {
            st.solutions.push(values_of(&d));
        }
        return;
    };
    let mut order: Vec<u8> = (0..8).filter(|v| d[var] & (1 << v) != 0).collect();
    if let Some(avoid) = opts.avoid {
        let a = avoid[var];
        order.sort_by_key(|&v| v == a);
    }
    for v in order {
        let mut child = d.clone();
        child[var] = 1 << v;
        dfs(model, child, opts, st);
        if st.solutions.len() >= opts.cap || st.aborted {
            return;
        }
    }
}
