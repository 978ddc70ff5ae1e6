//! Naive reference implementations used by the integration tests. Written
//! from the rules directly with plain coordinate loops; nothing here calls
//! into the rule engine.

#![allow(dead_code)]

use std::sync::Arc;

use graph_puzzles::instance::{Clues, Layout};
use graph_puzzles::{GridSpec, PuzzleKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ORTH: [(isize, isize); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

fn at(w: usize, h: usize, r: usize, c: usize, dr: isize, dc: isize) -> Option<usize> {
    let (r2, c2) = (r as isize + dr, c as isize + dc);
    (r2 >= 0 && c2 >= 0 && (r2 as usize) < h && (c2 as usize) < w).then(|| r2 as usize * w + c2 as usize)
}

/// `(decision, meta)` flags recomputed from scratch.
pub fn naive_violations(layout: &Layout, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
    match layout.kind {
        PuzzleKind::Tents => tents(layout, v),
        PuzzleKind::Lightup => lightup(layout, v),
        PuzzleKind::Mosaic => mosaic(layout, v),
        PuzzleKind::Loopy => loopy(layout, v),
        PuzzleKind::Net => (vec![0; v.len()], vec![]),
        PuzzleKind::Unruly => unruly(layout, v),
    }
}

fn tents(layout: &Layout, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
    const EMPTY: u8 = 0;
    const TENT: u8 = 2;
    const TREE: u8 = 3;
    let (w, h) = (layout.grid.width, layout.grid.height);
    let Clues::Tents { rows, cols } = &layout.clues else { panic!("tents clues") };
    let mut dec = vec![0; v.len()];
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if v[i] == TENT {
                for dr in -1..=1 {
                    for dc in -1..=1 {
                        if (dr, dc) != (0, 0) && at(w, h, r, c, dr, dc).is_some_and(|j| v[j] == TENT) {
                            dec[i] = 1;
                        }
                    }
                }
            }
            if v[i] == TREE {
                let room = ORTH
                    .iter()
                    .filter_map(|&(dr, dc)| at(w, h, r, c, dr, dc))
                    .any(|j| v[j] == TENT || v[j] == EMPTY);
                dec[i] = u8::from(!room);
            }
        }
    }
    let mut meta = Vec::new();
    for r in 0..h {
        let line: Vec<u8> = (0..w).map(|c| v[r * w + c]).collect();
        meta.push(count_flag(&line, rows[r], TENT, EMPTY));
    }
    for c in 0..w {
        let line: Vec<u8> = (0..h).map(|r| v[r * w + c]).collect();
        meta.push(count_flag(&line, cols[c], TENT, EMPTY));
    }
    (dec, meta)
}

fn count_flag(line: &[u8], clue: u8, hit: u8, open: u8) -> u8 {
    let hits = line.iter().filter(|&&x| x == hit).count();
    let opens = line.iter().filter(|&&x| x == open).count();
    u8::from(hits > clue as usize || hits + opens < clue as usize)
}

fn lightup(layout: &Layout, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
    const BULB: u8 = 1;
    let (w, h) = (layout.grid.width, layout.grid.height);
    let Clues::Lightup { numbers } = &layout.clues else { panic!("lightup clues") };
    let black = |i: usize| layout.fixed[i].is_some();
    let mut dec = vec![0; v.len()];
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if black(i) {
                if let Some(n) = numbers[i] {
                    let adj: Vec<usize> = ORTH
                        .iter()
                        .filter_map(|&(dr, dc)| at(w, h, r, c, dr, dc))
                        .filter(|&j| !black(j))
                        .collect();
                    let bulbs = adj.iter().filter(|&&j| v[j] == BULB).count();
                    let open = adj.len() - bulbs;
                    dec[i] = u8::from(bulbs > n as usize || bulbs + open < n as usize);
                }
                continue;
            }
            if v[i] != BULB {
                continue;
            }
            for (dr, dc) in ORTH {
                let (mut rr, mut cc) = (r, c);
                while let Some(j) = at(w, h, rr, cc, dr, dc) {
                    if black(j) {
                        break;
                    }
                    if v[j] == BULB {
                        dec[i] = 1;
                    }
                    (rr, cc) = (j / w, j % w);
                }
            }
        }
    }
    (dec, vec![])
}

/// Cells lit by a bulb, by walking rays.
pub fn naive_lit(layout: &Layout, v: &[u8]) -> Vec<bool> {
    let (w, h) = (layout.grid.width, layout.grid.height);
    let black = |i: usize| layout.fixed[i].is_some();
    let mut lit = vec![false; v.len()];
    for i in (0..v.len()).filter(|&i| !black(i) && v[i] == 1) {
        lit[i] = true;
        for (dr, dc) in ORTH {
            let (mut r, mut c) = (i / w, i % w);
            while let Some(j) = at(w, h, r, c, dr, dc) {
                if black(j) {
                    break;
                }
                lit[j] = true;
                (r, c) = (j / w, j % w);
            }
        }
    }
    lit
}

fn mosaic(layout: &Layout, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let (w, h) = (layout.grid.width, layout.grid.height);
    let Clues::Mosaic { numbers } = &layout.clues else { panic!("mosaic clues") };
    let mut dec = vec![0; v.len()];
    for r in 0..h {
        for c in 0..w {
            let Some(n) = numbers[r * w + c] else { continue };
            let mut block = Vec::new();
            for dr in -1..=1 {
                for dc in -1..=1 {
                    if let Some(j) = at(w, h, r, c, dr, dc) {
                        block.push(v[j]);
                    }
                }
            }
            dec[r * w + c] = count_flag(&block, n, 1, 0);
        }
    }
    (dec, vec![])
}

/// Loopy edge endpoints as vertex coordinates; horizontal edges come first.
pub fn loopy_endpoints(w: usize, h: usize, e: usize) -> ((usize, usize), (usize, usize)) {
    let hc = (h + 1) * w;
    if e < hc {
        let (r, c) = (e / w, e % w);
        ((r, c), (r, c + 1))
    } else {
        let k = e - hc;
        let (r, c) = (k / (w + 1), k % (w + 1));
        ((r, c), (r + 1, c))
    }
}

pub fn loopy_face_sides(w: usize, h: usize, r: usize, c: usize) -> [usize; 4] {
    let hc = (h + 1) * w;
    [r * w + c, hc + r * (w + 1) + c + 1, (r + 1) * w + c, hc + r * (w + 1) + c]
}

fn loopy(layout: &Layout, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
    const UNDECIDED: u8 = 0;
    const LINE: u8 = 1;
    let (w, h) = (layout.grid.width, layout.grid.height);
    let Clues::Loopy { faces } = &layout.clues else { panic!("loopy clues") };
    let degree = |p: (usize, usize)| {
        (0..v.len())
            .filter(|&e| v[e] == LINE)
            .filter(|&e| {
                let (a, b) = loopy_endpoints(w, h, e);
                a == p || b == p
            })
            .count()
    };
    let mut dec = vec![0; v.len()];
    for e in (0..v.len()).filter(|&e| v[e] == LINE) {
        let (a, b) = loopy_endpoints(w, h, e);
        dec[e] = u8::from(degree(a) > 2 || degree(b) > 2);
    }
    let mut meta = vec![0; w * h];
    for r in 0..h {
        for c in 0..w {
            if let Some(n) = faces[r * w + c] {
                let sides: Vec<u8> = loopy_face_sides(w, h, r, c).iter().map(|&e| v[e]).collect();
                meta[r * w + c] = count_flag(&sides, n, LINE, UNDECIDED);
            }
        }
    }
    (dec, meta)
}

fn unruly(layout: &Layout, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let (w, h) = (layout.grid.width, layout.grid.height);
    let mut dec = vec![0u8; v.len()];
    let mut meta = vec![0u8; w + h];
    for r in 0..h {
        for c in 0..w {
            for start in c.saturating_sub(2)..=c {
                if start + 3 <= w {
                    let x = v[r * w + start];
                    if x != 0 && (start..start + 3).all(|k| v[r * w + k] == x) {
                        dec[r * w + c] |= 1;
                    }
                }
            }
            for start in r.saturating_sub(2)..=r {
                if start + 3 <= h {
                    let x = v[start * w + c];
                    if x != 0 && (start..start + 3).all(|k| v[k * w + c] == x) {
                        dec[r * w + c] |= 2;
                    }
                }
            }
        }
    }
    let over = |cells: &[u8], len: usize| [1u8, 2].iter().any(|&x| cells.iter().filter(|&&y| y == x).count() > len / 2);
    for r in 0..h {
        let row: Vec<u8> = (0..w).map(|c| v[r * w + c]).collect();
        if over(&row, w) {
            meta[r] = 4;
            (0..w).for_each(|c| dec[r * w + c] |= 4);
        }
    }
    for c in 0..w {
        let col: Vec<u8> = (0..h).map(|r| v[r * w + c]).collect();
        if over(&col, h) {
            meta[h + c] = 4;
            (0..h).for_each(|r| dec[r * w + c] |= 4);
        }
    }
    (dec, meta)
}

/// Net connector mask after `turns` clockwise quarter turns.
pub fn net_turn(mask: u8, turns: u8) -> u8 {
    // N=1 E=2 S=4 W=8; clockwise moves N to E
    let dirs = [1u8, 2, 4, 8];
    let mut out = 0;
    for (k, &d) in dirs.iter().enumerate() {
        if mask & d != 0 {
            out |= dirs[(k + turns as usize) % 4];
        }
    }
    out
}

pub fn net_period(mask: u8) -> u8 {
    (1..=4).find(|&p| net_turn(mask, p) == mask).unwrap()
}

pub fn naive_net_solved(layout: &Layout, v: &[u8]) -> bool {
    let (w, h) = (layout.grid.width, layout.grid.height);
    let Clues::Net { tiles, .. } = &layout.clues else { panic!("net clues") };
    let n = w * h;
    let m: Vec<u8> = (0..n).map(|i| net_turn(tiles[i], v[i])).collect();
    let bit = [1u8, 2, 4, 8];
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for (k, &(dr, dc)) in ORTH.iter().enumerate() {
            if m[i] & bit[k] == 0 {
                continue;
            }
            match at(w, h, i / w, i % w, dr, dc) {
                Some(j) if m[j] & bit[(k + 2) % 4] != 0 => adj[i].push(j),
                _ => return false,
            }
        }
    }
    let links: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    links == n - 1 && seen.iter().all(|&s| s)
}

pub fn naive_unruly_solved(layout: &Layout, v: &[u8]) -> bool {
    let (d, _) = unruly(layout, v);
    let (w, h) = (layout.grid.width, layout.grid.height);
    let balanced = (0..h).all(|r| (0..w).filter(|&c| v[r * w + c] == 1).count() * 2 == w)
        && (0..w).all(|c| (0..h).filter(|&r| v[r * w + c] == 1).count() * 2 == h);
    v.iter().all(|&x| x != 0) && d.iter().all(|&f| f == 0) && balanced
}

/// All assignments of the free cells, each free cell ranging over `domain(i)`.
pub fn enumerate(fixed: &[Option<u8>], domain: impl Fn(usize) -> Vec<u8>) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for (i, f) in fixed.iter().enumerate() {
        let choices = f.map_or_else(|| domain(i), |x| vec![x]);
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// A layout without clues or fixed cells.
pub fn blank_layout(kind: PuzzleKind, grid: GridSpec) -> Layout {
    let n = kind.decision_count(grid);
    let clues = match kind {
        PuzzleKind::Tents => Clues::Tents { rows: vec![0; grid.height], cols: vec![0; grid.width] },
        PuzzleKind::Lightup => Clues::Lightup { numbers: vec![None; n] },
        PuzzleKind::Mosaic => Clues::Mosaic { numbers: vec![None; n] },
        PuzzleKind::Loopy => Clues::Loopy { faces: vec![None; grid.cells()] },
        PuzzleKind::Net => Clues::Net { tiles: vec![1; n], source: 0 },
        PuzzleKind::Unruly => Clues::Unruly,
    };
    Layout { kind, grid, fixed: vec![None; n], clues }
}

/// A layout with random clues, not necessarily solvable. Values of fixed
/// cells follow the kind's conventions.
pub fn random_layout(kind: PuzzleKind, grid: GridSpec, r: &mut ChaCha8Rng) -> Arc<Layout> {
    let (w, h) = (grid.width, grid.height);
    let n = kind.decision_count(grid);
    let mut fixed = vec![None; n];
    let clues = match kind {
        PuzzleKind::Tents => {
            for f in fixed.iter_mut() {
                if r.gen_bool(0.2) {
                    *f = Some(3);
                }
            }
            Clues::Tents {
                rows: (0..h).map(|_| r.gen_range(0..=(w as u8).div_ceil(2))).collect(),
                cols: (0..w).map(|_| r.gen_range(0..=(h as u8).div_ceil(2))).collect(),
            }
        }
        PuzzleKind::Lightup => {
            let mut numbers = vec![None; n];
            for i in 0..n {
                if r.gen_bool(0.25) {
                    fixed[i] = Some(0);
                    if r.gen_bool(0.6) {
                        numbers[i] = Some(r.gen_range(0..=4));
                    }
                }
            }
            Clues::Lightup { numbers }
        }
        PuzzleKind::Mosaic => Clues::Mosaic {
            numbers: (0..n).map(|_| r.gen_bool(0.5).then(|| r.gen_range(0..=9))).collect(),
        },
        PuzzleKind::Loopy => Clues::Loopy {
            faces: (0..w * h).map(|_| r.gen_bool(0.5).then(|| r.gen_range(0..=4))).collect(),
        },
        PuzzleKind::Net => Clues::Net {
            tiles: (0..n).map(|_| r.gen_range(1..16)).collect(),
            source: r.gen_range(0..n),
        },
        PuzzleKind::Unruly => {
            for f in fixed.iter_mut() {
                if r.gen_bool(0.2) {
                    *f = Some(r.gen_range(1..=2));
                }
            }
            Clues::Unruly
        }
    };
    Arc::new(Layout { kind, grid, fixed, clues })
}

/// Uniform values for the free cells of `layout`.
pub fn random_values(layout: &Layout, r: &mut ChaCha8Rng) -> Vec<u8> {
    let free_max = match layout.kind {
        PuzzleKind::Tents => 3,
        PuzzleKind::Lightup => 2,
        PuzzleKind::Net => 4,
        _ => layout.kind.num_values() as u8,
    };
    layout
        .fixed
        .iter()
        .enumerate()
        .map(|(i, f)| match (f, &layout.clues) {
            (Some(x), _) => *x,
            (None, Clues::Net { tiles, .. }) => r.gen_range(0..net_period(tiles[i])),
            (None, _) => r.gen_range(0..free_max),
        })
        .collect()
}

/// Matches against the solution, with or without violation masking.
pub fn naive_quality(values: &[u8], solution: &[u8], flags: Option<&[u8]>) -> usize {
    (0..values.len())
        .filter(|&i| values[i] == solution[i] && flags.is_none_or(|f| f[i] == 0))
        .count()
}
