//! Net: rotate tiles until every connector meets a matching connector and the
//! whole board forms one tree hanging off the source tile.
//!
//! A cell's value is its number of clockwise quarter turns relative to the
//! presented tile, reduced modulo the tile's rotational period, so two values
//! are equal exactly when the rotated tiles look the same.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::instance::Layout;
use crate::puzzle::{Dir, PuzzleKind};

/// Rotates a connector mask (N=1, E=2, S=4, W=8) clockwise by `turns`
/// quarter turns.
pub fn rotate(mask: u8, turns: u8) -> u8 {
    let mut m = mask & 0xf;
    for _ in 0..turns % 4 {
        m = ((m << 1) | (m >> 3)) & 0xf;
    }
    m
}

/// Smallest positive number of quarter turns mapping the tile onto itself.
pub fn period(mask: u8) -> u8 {
    [1, 2, 4].into_iter().find(|&p| rotate(mask, p) == mask & 0xf).unwrap_or(4)
}

pub fn connectors(layout: &Layout, values: &[u8], i: usize) -> u8 {
    rotate(layout.net_tiles().0[i], values[i])
}

/// Whether `i` and its neighbour in `dir` both point at each other.
pub fn linked(layout: &Layout, values: &[u8], i: usize, dir: Dir) -> Option<usize> {
    let j = layout.grid.step(i, dir)?;
    (connectors(layout, values, i) & dir.bit() != 0
        && connectors(layout, values, j) & dir.opposite().bit() != 0)
        .then_some(j)
}

/// Cells reachable from the source through mutually facing connectors.
pub fn connected_from_source(layout: &Layout, values: &[u8]) -> Result<Vec<bool>> {
    if layout.kind != PuzzleKind::Net {
        return Err(Error::contract(format!(
            "source connectivity needs a net board, got {}",
            layout.kind
        )));
    }
    let (_, source) = layout.net_tiles();
    let mut seen = vec![false; values.len()];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(i) = queue.pop_front() {
        for d in Dir::ALL {
            if let Some(j) = linked(layout, values, i, d) {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(seen)
}

pub fn is_solved(layout: &Layout, values: &[u8]) -> bool {
    let g = layout.grid;
    let mut links = 0;
    for i in 0..values.len() {
        let c = connectors(layout, values, i);
        for d in Dir::ALL.into_iter().filter(|d| c & d.bit() != 0) {
            match linked(layout, values, i, d) {
                Some(_) => links += 1,
                None => return false,
            }
        }
    }
    // each link was counted from both ends; a spanning tree has cells - 1
    links / 2 == g.cells() - 1
        && connected_from_source(layout, values).is_ok_and(|c| c.iter().all(|&x| x))
}
