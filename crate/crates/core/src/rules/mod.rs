//! Rule engines: simultaneous action application, per-node violation flags
//! and solved checks for the six puzzles.
//!
//! Every engine works on a [`Layout`] plus a flat value slice in canonical
//! order, so the solver and generators can reuse the same checks that the
//! environment uses.

pub mod lightup;
pub mod loopy;
pub mod mosaic;
pub mod net;
pub mod tents;
pub mod unruly;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::{Layout, PuzzleInstance};
use crate::puzzle::{Fnv64, PuzzleKind, StateSequence};

/// One action index per decision node, in canonical order.
pub type ActionVector = Vec<u8>;

/// Per-node violation flags. Each entry is a small bit set; for every kind
/// except Unruly only bit 0 is used. A node is "violated" when its entry is
/// non-zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Violations {
    pub decision: Vec<u8>,
    pub meta: Vec<u8>,
}

impl Violations {
    pub fn clear(decision: usize, meta: usize) -> Self {
        Violations { decision: vec![0; decision], meta: vec![0; meta] }
    }

    pub fn any(&self) -> bool {
        self.decision.iter().chain(&self.meta).any(|&f| f != 0)
    }

    pub fn is_violated(&self, decision_node: usize) -> bool {
        self.decision[decision_node] != 0
    }
}

/// A live board. Violations and the solved flag are always in sync with
/// `values`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuzzleState {
    layout: Arc<Layout>,
    values: StateSequence,
    violations: Violations,
    solved: bool,
}

impl PuzzleState {
    pub fn new(layout: Arc<Layout>, values: StateSequence) -> Result<Self> {
        if values.len() != layout.decision_count() {
            return Err(Error::contract(format!(
                "state has {} values, {} {} needs {}",
                values.len(),
                layout.kind,
                layout.grid,
                layout.decision_count()
            )));
        }
        let m = layout.kind.num_values() as u8;
        if let Some(i) = values.iter().position(|&v| v >= m) {
            return Err(Error::contract(format!("value {} out of range at {i}", values[i])));
        }
        if let Some(i) = (0..values.len()).find(|&i| layout.fixed[i].is_some_and(|f| f != values[i])) {
            return Err(Error::contract(format!("fixed cell {i} was changed")));
        }
        if layout.kind == PuzzleKind::Net {
            let (tiles, _) = layout.net_tiles();
            if let Some(i) = (0..values.len()).find(|&i| values[i] >= net::period(tiles[i])) {
                return Err(Error::contract(format!("net orientation out of period at {i}")));
            }
        }
        Ok(Self::from_parts(layout, values))
    }

    fn from_parts(layout: Arc<Layout>, values: StateSequence) -> Self {
        let violations = violations(&layout, &values);
        let solved = is_solved(&layout, &values);
        PuzzleState { layout, values, violations, solved }
    }

    /// The unplayed board of an instance.
    pub fn initial(instance: &PuzzleInstance) -> Self {
        Self::from_parts(instance.layout.clone(), instance.layout.initial_values())
    }

    /// The board with every cell set to the stored solution.
    pub fn solved_board(instance: &PuzzleInstance) -> Self {
        Self::from_parts(instance.layout.clone(), instance.solution.clone())
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn kind(&self) -> PuzzleKind {
        self.layout.kind
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn violations(&self) -> &Violations {
        &self.violations
    }

    pub fn is_solved(&self) -> bool {
        self.solved
    }

    pub fn decision_count(&self) -> usize {
        self.values.len()
    }

    /// Canonical flattening of the decision-cell values (meta-nodes excluded).
    pub fn canonical_sequence(&self) -> StateSequence {
        self.values.clone()
    }

    pub fn digest(&self) -> u64 {
        let mut h = Fnv64::default();
        h.write_u64(self.layout.digest());
        h.write(&self.values);
        h.finish()
    }

    /// Applies one action per decision node simultaneously.
    pub fn apply(&self, actions: &[u8]) -> Result<PuzzleState> {
        let kind = self.kind();
        if actions.len() != self.values.len() {
            return Err(Error::contract(format!(
                "action vector has {} entries, expected {}",
                actions.len(),
                self.values.len()
            )));
        }
        let na = kind.num_actions() as u8;
        if let Some(i) = actions.iter().position(|&a| a >= na) {
            return Err(Error::contract(format!(
                "action {} out of range for {kind} at node {i}",
                actions[i]
            )));
        }
        let values = self
            .values
            .iter()
            .zip(actions)
            .enumerate()
            .map(|(i, (&v, &a))| transition(&self.layout, i, v, a))
            .collect();
        Ok(Self::from_parts(self.layout.clone(), values))
    }
}

/// New value of decision node `i` after `action`. Fixed cells never change.
pub fn transition(layout: &Layout, i: usize, value: u8, action: u8) -> u8 {
    if layout.is_fixed(i) || action == layout.kind.noop_action() {
        return value;
    }
    match layout.kind {
        PuzzleKind::Net => {
            let p = net::period(layout.net_tiles().0[i]);
            (value + action + 1) % p
        }
        PuzzleKind::Tents => [tents::TENT, tents::GRASS, tents::EMPTY][action as usize],
        PuzzleKind::Lightup => [lightup::BULB, lightup::EMPTY][action as usize],
        PuzzleKind::Mosaic => [mosaic::MARKED, mosaic::BLANK, mosaic::UNMARKED][action as usize],
        PuzzleKind::Loopy => [loopy::LINE, loopy::NO_LINE, loopy::UNDECIDED][action as usize],
        PuzzleKind::Unruly => [unruly::WHITE, unruly::BLACK][action as usize],
    }
}

/// The single action that moves node `i` from `current` towards `target`
/// (DO NOTHING if already equal or unreachable in one step).
pub fn action_toward(layout: &Layout, i: usize, current: u8, target: u8) -> u8 {
    let noop = layout.kind.noop_action();
    if current == target || layout.is_fixed(i) {
        return noop;
    }
    if layout.kind == PuzzleKind::Net {
        let p = net::period(layout.net_tiles().0[i]);
        let turns = (target + p - current) % p;
        return if turns == 0 { noop } else { turns - 1 };
    }
    (0..noop)
        .find(|&a| transition(layout, i, current, a) == target)
        .unwrap_or(noop)
}

pub fn violations(layout: &Layout, values: &[u8]) -> Violations {
    match layout.kind {
        PuzzleKind::Tents => tents::violations(layout, values),
        PuzzleKind::Lightup => lightup::violations(layout, values),
        PuzzleKind::Mosaic => mosaic::violations(layout, values),
        PuzzleKind::Loopy => loopy::violations(layout, values),
        PuzzleKind::Net => Violations::clear(values.len(), 0),
        PuzzleKind::Unruly => unruly::violations(layout, values),
    }
}

pub fn is_solved(layout: &Layout, values: &[u8]) -> bool {
    match layout.kind {
        PuzzleKind::Tents => tents::is_solved(layout, values),
        PuzzleKind::Lightup => lightup::is_solved(layout, values),
        PuzzleKind::Mosaic => mosaic::is_solved(layout, values),
        PuzzleKind::Loopy => loopy::is_solved(layout, values),
        PuzzleKind::Net => net::is_solved(layout, values),
        PuzzleKind::Unruly => unruly::is_solved(layout, values),
    }
}

/// Kuhn's augmenting-path matching; returns the size of a maximum matching
/// between `adj.len()` left vertices and `right` right vertices.
pub(crate) fn max_matching(adj: &[Vec<usize>], right: usize) -> usize {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [usize]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v] == usize::MAX || augment(owner[v], adj, seen, owner) {
                    owner[v] = u;
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; right];
    let mut seen = vec![false; right];
    let mut size = 0;
    for u in 0..adj.len() {
        seen.iter_mut().for_each(|s| *s = false);
        if augment(u, adj, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Clues;
    use crate::puzzle::GridSpec;

    fn net_layout() -> Arc<Layout> {
        // a 2x2 ring broken at one side: L, T-less chain
        Arc::new(Layout {
            kind: PuzzleKind::Net,
            grid: GridSpec::square(2),
            fixed: vec![None; 4],
            clues: Clues::Net { tiles: vec![0b0011, 0b1010, 0b0001, 0b0001], source: 0 },
        })
    }

    #[test]
    fn rotate_north_east_clockwise() {
        assert_eq!(net::rotate(0b0011, 1), 0b0110);
    }

    #[test]
    fn noop_vector_is_identity() {
        let layout = net_layout();
        let s = PuzzleState::new(layout, vec![0, 1, 2, 3]).unwrap();
        let t = s.apply(&[3, 3, 3, 3]).unwrap();
        assert_eq!(s, t);
        assert_eq!(s.digest(), t.digest());
    }

    #[test]
    fn bad_vectors_are_rejected() {
        let s = PuzzleState::new(net_layout(), vec![0; 4]).unwrap();
        assert!(s.apply(&[3, 3, 3]).is_err());
        assert!(s.apply(&[3, 3, 3, 4]).is_err());
    }

    #[test]
    fn four_quarter_turns_are_identity() {
        let s = PuzzleState::new(net_layout(), vec![0, 1, 2, 3]).unwrap();
        let mut t = s.clone();
        for _ in 0..4 {
            t = t.apply(&[0; 4]).unwrap();
        }
        assert_eq!(s.values(), t.values());
    }

    #[test]
    fn matching_sizes() {
        assert_eq!(max_matching(&[vec![0, 1], vec![0]], 2), 2);
        assert_eq!(max_matching(&[vec![0], vec![0]], 2), 1);
    }
}
