//! State quality against the stored solution and the three reward schemes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::PuzzleState;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardMode {
    /// `n` when the puzzle gets solved, zero otherwise.
    Sparse,
    /// Positive increments of the running best quality.
    #[default]
    Iterative,
    /// Like iterative, over the violation-masked quality.
    Partial,
}

impl RewardMode {
    pub const ALL: [RewardMode; 3] = [RewardMode::Sparse, RewardMode::Iterative, RewardMode::Partial];

    pub fn name(self) -> &'static str {
        match self {
            RewardMode::Sparse => "sparse",
            RewardMode::Iterative => "iterative",
            RewardMode::Partial => "partial",
        }
    }
}

impl fmt::Display for RewardMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RewardMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RewardMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::contract(format!("unknown reward mode {s:?}")))
    }
}

fn check_len(values: &[u8], solution: &[u8]) -> Result<()> {
    if values.len() != solution.len() {
        return Err(Error::contract(format!(
            "state has {} values, solution has {}",
            values.len(),
            solution.len()
        )));
    }
    Ok(())
}

/// Number of decision cells that already hold their solution value.
pub fn quality(values: &[u8], solution: &[u8]) -> Result<usize> {
    check_len(values, solution)?;
    Ok(values.iter().zip(solution).filter(|(a, b)| a == b).count())
}

/// Like [`quality`], but cells with a nonzero violation flag never count.
pub fn masked_quality(values: &[u8], solution: &[u8], violations: &[u8]) -> Result<usize> {
    check_len(values, solution)?;
    check_len(violations, solution)?;
    Ok((0..values.len())
        .filter(|&i| values[i] == solution[i] && violations[i] == 0)
        .count())
}

/// Running best qualities of one episode.
#[derive(Clone, Debug, PartialEq)]
pub struct RewardTracker {
    mode: RewardMode,
    normalize: bool,
    n: usize,
    q_best: usize,
    masked_best: usize,
    q: usize,
    masked: usize,
}

impl RewardTracker {
    /// Starts an episode; the best qualities begin at those of `initial`.
    pub fn new(mode: RewardMode, initial: &PuzzleState, solution: &[u8]) -> Result<Self> {
        let q = quality(initial.values(), solution)?;
        let masked = masked_quality(initial.values(), solution, &initial.violations().decision)?;
        Ok(RewardTracker {
            mode,
            normalize: false,
            n: solution.len(),
            q_best: q,
            masked_best: masked,
            q,
            masked,
        })
    }

    /// Divide every reward by `n`.
    pub fn normalized(mut self, on: bool) -> Self {
        self.normalize = on;
        self
    }

    pub fn mode(&self) -> RewardMode {
        self.mode
    }

    /// Solved bonus of the sparse scheme (before normalization).
    pub fn bonus(&self) -> usize {
        self.n
    }

    pub fn q_best(&self) -> usize {
        self.q_best
    }

    pub fn masked_best(&self) -> usize {
        self.masked_best
    }

    /// Quality of the latest state.
    pub fn quality(&self) -> usize {
        self.q
    }

    pub fn masked_quality(&self) -> usize {
        self.masked
    }

    /// Reward for moving to `next`; updates the running bests.
    pub fn step(&mut self, next: &PuzzleState, solution: &[u8]) -> Result<f64> {
        self.q = quality(next.values(), solution)?;
        self.masked = masked_quality(next.values(), solution, &next.violations().decision)?;
        let gain = self.q.saturating_sub(self.q_best);
        let masked_gain = self.masked.saturating_sub(self.masked_best);
        self.q_best = self.q_best.max(self.q);
        self.masked_best = self.masked_best.max(self.masked);
        let raw = match self.mode {
            RewardMode::Iterative => gain,
            RewardMode::Partial => masked_gain,
            RewardMode::Sparse if next.is_solved() => self.n,
            RewardMode::Sparse => 0,
        };
        Ok(if self.normalize { raw as f64 / self.n.max(1) as f64 } else { raw as f64 })
    }
}
