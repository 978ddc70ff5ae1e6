//! Shared identifiers, grid geometry, digests and seeded randomness.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PuzzleKind {
    Tents,
    Lightup,
    Mosaic,
    Loopy,
    Net,
    Unruly,
}

impl PuzzleKind {
    pub const ALL: [PuzzleKind; 6] = [
        PuzzleKind::Tents,
        PuzzleKind::Lightup,
        PuzzleKind::Mosaic,
        PuzzleKind::Loopy,
        PuzzleKind::Net,
        PuzzleKind::Unruly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PuzzleKind::Tents => "tents",
            PuzzleKind::Lightup => "lightup",
            PuzzleKind::Mosaic => "mosaic",
            PuzzleKind::Loopy => "loopy",
            PuzzleKind::Net => "net",
            PuzzleKind::Unruly => "unruly",
        }
    }

    /// Number of distinct values a decision cell can hold (`m`).
    pub fn num_values(self) -> usize {
        match self {
            PuzzleKind::Tents => 4,
            PuzzleKind::Lightup => 2,
            PuzzleKind::Mosaic => 3,
            PuzzleKind::Loopy => 3,
            PuzzleKind::Net => 4,
            PuzzleKind::Unruly => 3,
        }
    }

    /// Size of the per-node action table, including DO NOTHING.
    pub fn num_actions(self) -> usize {
        match self {
            PuzzleKind::Lightup | PuzzleKind::Unruly => 3,
            _ => 4,
        }
    }

    /// Index of the DO NOTHING action (always the last entry).
    pub fn noop_action(self) -> u8 {
        (self.num_actions() - 1) as u8
    }

    pub fn action_names(self) -> &'static [&'static str] {
        match self {
            PuzzleKind::Net => &["rotate 90", "rotate 180", "rotate 270", "do nothing"],
            PuzzleKind::Lightup => &["place lightbulb", "empty cell", "do nothing"],
            PuzzleKind::Loopy => &["mark line", "unmark line", "empty line", "do nothing"],
            PuzzleKind::Tents => &["place tent", "place grass", "empty cell", "do nothing"],
            PuzzleKind::Mosaic => &["mark cell", "unmark cell", "empty cell", "do nothing"],
            PuzzleKind::Unruly => &["turn cell white", "turn cell black", "do nothing"],
        }
    }

    /// Width of a node feature row in the graph observation.
    pub fn feature_width(self) -> usize {
        match self {
            PuzzleKind::Net | PuzzleKind::Loopy => 6,
            PuzzleKind::Lightup | PuzzleKind::Mosaic | PuzzleKind::Tents => 7,
            PuzzleKind::Unruly => 8,
        }
    }

    /// Number of decision nodes (length of the canonical sequence).
    pub fn decision_count(self, grid: GridSpec) -> usize {
        let (w, h) = (grid.width, grid.height);
        match self {
            PuzzleKind::Loopy => 2 * w * h + w + h,
            _ => w * h,
        }
    }

    pub fn meta_count(self, grid: GridSpec) -> usize {
        let (w, h) = (grid.width, grid.height);
        match self {
            PuzzleKind::Tents | PuzzleKind::Unruly => w + h,
            PuzzleKind::Loopy => w * h,
            _ => 0,
        }
    }

    pub fn validate(self, grid: GridSpec) -> Result<()> {
        if grid.width < 2 || grid.height < 2 {
            return Err(Error::contract(format!(
                "{} needs at least 2x2, got {grid}",
                self.name()
            )));
        }
        if self == PuzzleKind::Unruly && (!grid.width.is_multiple_of(2) || !grid.height.is_multiple_of(2)) {
            return Err(Error::contract(format!(
                "unruly needs even width and height, got {grid}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PuzzleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PuzzleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PuzzleKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::contract(format!("unknown puzzle kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub const fn new(width: usize, height: usize) -> Self {
        GridSpec { width, height }
    }

    pub const fn square(side: usize) -> Self {
        GridSpec::new(side, side)
    }

    pub fn cells(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / self.width, idx % self.width)
    }

    /// Orthogonal neighbours in N, E, S, W order.
    pub fn orthogonal(&self, idx: usize) -> impl Iterator<Item = (Dir, usize)> + '_ {
        Dir::ALL.into_iter().filter_map(move |d| self.step(idx, d).map(|n| (d, n)))
    }

    /// All eight neighbours (no wrap-around).
    pub fn king(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (r, c) = self.coords(idx);
        let (r, c) = (r as isize, c as isize);
        (-1isize..=1)
            .flat_map(move |dr| (-1isize..=1).map(move |dc| (dr, dc)))
            .filter(|&d| d != (0, 0))
            .filter_map(move |(dr, dc)| self.offset(r + dr, c + dc))
    }

    /// The 3x3 block centred on `idx`, clipped at the border, including `idx`.
    pub fn block(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(idx).chain(self.king(idx))
    }

    pub fn step(&self, idx: usize, dir: Dir) -> Option<usize> {
        let (r, c) = self.coords(idx);
        let (dr, dc) = dir.delta();
        self.offset(r as isize + dr, c as isize + dc)
    }

    fn offset(&self, r: isize, c: isize) -> Option<usize> {
        (r >= 0 && c >= 0 && (r as usize) < self.height && (c as usize) < self.width)
            .then(|| self.index(r as usize, c as usize))
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::contract(format!("bad size {s:?}, expected WxH"));
        let (w, h) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        Ok(GridSpec::new(
            w.parse().map_err(|_| bad())?,
            h.parse().map_err(|_| bad())?,
        ))
    }
}

/// Compass direction on the cell grid. Discriminants double as connector bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    N = 1,
    E = 2,
    S = 4,
    W = 8,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::E => Dir::W,
            Dir::S => Dir::N,
            Dir::W => Dir::E,
        }
    }

    pub fn delta(self) -> (isize, isize) {
        match self {
            Dir::N => (-1, 0),
            Dir::E => (0, 1),
            Dir::S => (1, 0),
            Dir::W => (0, -1),
        }
    }
}

/// Canonical flattening of the decision-cell values of a state.
pub type StateSequence = Vec<u8>;

/// 64-bit FNV-1a. No per-process salt, so digests are stable across runs.
#[derive(Clone, Copy, Debug)]
pub struct Fnv64(u64);

impl Default for Fnv64 {
    fn default() -> Self {
        Fnv64(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv64 {
    pub fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub fn write_u64(&mut self, v: u64) {
        self.write(&v.to_le_bytes());
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic sub-stream for `(seed, kind, size, stream)`.
pub fn seeded_rng(seed: u64, kind: PuzzleKind, grid: GridSpec, stream: u64) -> ChaCha8Rng {
    let mut s = splitmix(seed);
    s = splitmix(s ^ kind as u64);
    s = splitmix(s ^ ((grid.width as u64) << 32 | grid.height as u64));
    s = splitmix(s ^ stream);
    ChaCha8Rng::seed_from_u64(s)
}

/// Mixes two seeds into one (used to derive per-instance seeds).
pub fn mix_seed(a: u64, b: u64) -> u64 {
    splitmix(splitmix(a) ^ b)
}
