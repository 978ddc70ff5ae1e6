//! Unique-solution instance generators and configuration counting.
//!
//! Every generator is deterministic in `(kind, size, seed)`: attempt `k`
//! draws from its own seeded sub-stream, and the first attempt that yields a
//! uniquely solvable puzzle wins. Each attempt carries its own uniqueness
//! proof: it starts from a configuration the solver has shown to be unique
//! and only removes a clue after proving the rest still pins the solution.

mod lightup;
mod loopy;
mod mosaic;
mod net;
mod tents;
mod unruly;

use std::collections::HashSet;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Layout, PuzzleInstance};
use crate::puzzle::{seeded_rng, GridSpec, PuzzleKind, StateSequence};
use crate::solver;

/// Attempts per `(seed, kind, size)` before giving up.
pub const RETRY_BUDGET: usize = 1000;

/// Node budget for the uniqueness probes made while removing clues. A probe
/// that runs out keeps the clue, so the budget only trades clue count for
/// speed.
pub(crate) const PROBE_NODES: u64 = 300;

/// Node budget of the final independent uniqueness re-check.
pub(crate) const RECHECK_NODES: u64 = 20_000;

/// Board size each puzzle is trained on.
pub fn training_size(kind: PuzzleKind) -> GridSpec {
    match kind {
        PuzzleKind::Tents => GridSpec::square(5),
        PuzzleKind::Lightup => GridSpec::square(6),
        PuzzleKind::Mosaic => GridSpec::square(4),
        PuzzleKind::Loopy => GridSpec::square(4),
        PuzzleKind::Net => GridSpec::square(4),
        PuzzleKind::Unruly => GridSpec::square(6),
    }
}

/// Board size used for model selection during training (one step larger).
pub fn validation_size(kind: PuzzleKind) -> GridSpec {
    match kind {
        PuzzleKind::Tents => GridSpec::square(6),
        PuzzleKind::Lightup => GridSpec::square(6),
        PuzzleKind::Mosaic | PuzzleKind::Loopy | PuzzleKind::Net => GridSpec::square(5),
        PuzzleKind::Unruly => GridSpec::square(8),
    }
}

pub(crate) type Candidate = (Layout, StateSequence);

pub fn generate(kind: PuzzleKind, grid: GridSpec, seed: u64) -> Result<PuzzleInstance> {
    kind.validate(grid)?;
    let mut last_reason = String::from("no attempt produced a candidate");
    for attempt in 0..RETRY_BUDGET {
        let mut rng = seeded_rng(seed, kind, grid, attempt as u64);
        let candidate = match kind {
            PuzzleKind::Tents => tents::attempt(grid, &mut rng),
            PuzzleKind::Lightup => lightup::attempt(grid, &mut rng),
            PuzzleKind::Mosaic => mosaic::attempt(grid, &mut rng),
            PuzzleKind::Loopy => loopy::attempt(grid, &mut rng),
            PuzzleKind::Net => net::attempt(grid, &mut rng),
            PuzzleKind::Unruly => unruly::attempt(grid, &mut rng),
        };
        let Some((layout, solution)) = candidate else { continue };
        // Every attempt proves uniqueness as it builds the puzzle; this is an
        // independent second look that may only overrule it with a witness.
        match solver::unique_given(&layout, &solution, Some(RECHECK_NODES)) {
            Some(false) => last_reason = format!("attempt {attempt} failed the uniqueness check"),
            _ => return Ok(PuzzleInstance { seed, layout: Arc::new(layout), solution }),
        }
    }
    Err(Error::Generation {
        kind: kind.name(),
        width: grid.width,
        height: grid.height,
        seed,
        attempts: RETRY_BUDGET,
        reason: last_reason,
    })
}

/// Generates `count` instances with per-instance seeds `base_seed + i`.
pub fn generate_many(
    kind: PuzzleKind,
    grid: GridSpec,
    base_seed: u64,
    count: usize,
) -> Result<Vec<PuzzleInstance>> {
    (0..count as u64)
        .map(|i| generate(kind, grid, base_seed.wrapping_add(i)))
        .collect()
}

/// Number of distinct puzzle configurations among instances generated from
/// seeds `0..samples`. A lower bound on the true number.
pub fn count_distinct(kind: PuzzleKind, grid: GridSpec, samples: usize) -> Result<usize> {
    if samples == 0 {
        return Err(Error::contract("count_distinct needs at least one sample"));
    }
    kind.validate(grid)?;
    let mut seen = HashSet::new();
    for seed in 0..samples as u64 {
        if let Ok(inst) = generate(kind, grid, seed) {
            seen.insert(inst.config_digest());
        }
    }
    Ok(seen.len())
}

/// Removes clues greedily in a random order while uniqueness is provable
/// within the probe budget. `toggle(layout, i, on)` hides or restores clue
/// slot `i`.
pub(crate) fn minimize(
    layout: &mut Layout,
    solution: &[u8],
    slots: Vec<usize>,
    rng: &mut ChaCha8Rng,
    mut toggle: impl FnMut(&mut Layout, usize, bool),
) {
    use rand::seq::SliceRandom;
    let mut slots = slots;
    slots.shuffle(rng);
    for i in slots {
        toggle(layout, i, false);
        if solver::unique_given(layout, solution, Some(PROBE_NODES)) != Some(true) {
            toggle(layout, i, true);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn training_sizes() {
        assert_eq!(training_size(PuzzleKind::Tents), GridSpec::square(5));
        assert_eq!(training_size(PuzzleKind::Loopy), GridSpec::square(4));
        assert_eq!(training_size(PuzzleKind::Unruly), GridSpec::square(6));
    }

    #[test]
    fn odd_unruly_is_rejected() {
        assert!(generate(PuzzleKind::Unruly, GridSpec::square(5), 1).is_err());
        assert!(generate(PuzzleKind::Unruly, GridSpec::square(6), 1).is_ok());
    }

    #[test]
    fn same_seed_same_instance() {
        for kind in PuzzleKind::ALL {
            let g = training_size(kind);
            assert_eq!(generate(kind, g, 11).unwrap(), generate(kind, g, 11).unwrap());
        }
    }

    #[test]
    fn zero_samples_is_an_error() {
        assert!(count_distinct(PuzzleKind::Net, GridSpec::square(3), 0).is_err());
    }
}
