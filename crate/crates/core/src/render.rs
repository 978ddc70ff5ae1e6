//! Plain-text boards. A `!` marks a violated cell, line or clue.

use std::fmt::Write as _;

use crate::instance::Clues;
use crate::puzzle::Dir;
use crate::rules::loopy::{self, Geometry};
use crate::rules::{lightup, mosaic, net, tents, unruly, PuzzleState};
use crate::PuzzleKind;

pub fn render(state: &PuzzleState) -> String {
    match state.kind() {
        PuzzleKind::Tents => render_tents(state),
        PuzzleKind::Lightup => render_lightup(state),
        PuzzleKind::Mosaic => render_mosaic(state),
        PuzzleKind::Loopy => render_loopy(state),
        PuzzleKind::Net => render_net(state),
        PuzzleKind::Unruly => render_unruly(state),
    }
}

fn mark(flag: u8) -> char {
    if flag != 0 {
        '!'
    } else {
        ' '
    }
}

/// Cells as `symbol` + marker, one row per line; `extra(r)` is appended.
fn cell_rows(state: &PuzzleState, symbol: impl Fn(usize) -> char, extra: impl Fn(usize) -> String) -> String {
    let g = state.layout().grid;
    let viol = &state.violations().decision;
    let mut out = String::new();
    for r in 0..g.height {
        let mut line = String::new();
        for c in 0..g.width {
            let i = g.index(r, c);
            line.push(symbol(i));
            line.push(mark(viol[i]));
        }
        line.push_str(&extra(r));
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn render_tents(state: &PuzzleState) -> String {
    let layout = state.layout();
    let (rows, cols) = tents::line_clues(layout);
    let meta = &state.violations().meta;
    let h = layout.grid.height;
    let v = state.values();
    let mut out = cell_rows(
        state,
        |i| match v[i] {
            tents::GRASS => '-',
            tents::TENT => 'A',
            tents::TREE => 'T',
            _ => '.',
        },
        |r| format!(" {}{}", rows[r], mark(meta[r])),
    );
    for (c, n) in cols.iter().enumerate() {
        let _ = write!(out, "{n}{}", mark(meta[h + c]));
    }
    out.push('\n');
    out
}

fn render_lightup(state: &PuzzleState) -> String {
    let layout = state.layout();
    let numbers = lightup::numbers(layout);
    let lit = lightup::lit(layout, state.values());
    let v = state.values();
    cell_rows(
        state,
        |i| match (lightup::is_black(layout, i), numbers[i]) {
            (true, Some(n)) => char::from(b'0' + n),
            (true, None) => '#',
            _ if v[i] == lightup::BULB => 'O',
            _ if lit[i] => '+',
            _ => '.',
        },
        |_| String::new(),
    )
}

fn render_mosaic(state: &PuzzleState) -> String {
    let layout = state.layout();
    let g = layout.grid;
    let numbers = mosaic::numbers(layout);
    let v = state.values();
    let viol = &state.violations().decision;
    let mut out = String::new();
    for r in 0..g.height {
        for c in 0..g.width {
            let i = g.index(r, c);
            out.push(match v[i] {
                mosaic::MARKED => '#',
                mosaic::BLANK => '_',
                _ => '.',
            });
            out.push(numbers[i].map_or(' ', |n| char::from(b'0' + n)));
            out.push(mark(viol[i]));
        }
        let len = out.trim_end_matches(' ').len();
        out.truncate(len);
        out.push('\n');
    }
    out
}

fn render_loopy(state: &PuzzleState) -> String {
    let layout = state.layout();
    let g = layout.grid;
    let geo = Geometry::new(g);
    let Clues::Loopy { faces } = &layout.clues else { unreachable!() };
    let v = state.values();
    let viol = state.violations();
    let horizontal = |e: usize| match (v[e], viol.decision[e] != 0) {
        (loopy::LINE, true) => "===",
        (loopy::LINE, false) => "---",
        (loopy::NO_LINE, _) => " x ",
        _ => "   ",
    };
    let vertical = |e: usize| match (v[e], viol.decision[e] != 0) {
        (loopy::LINE, true) => '!',
        (loopy::LINE, false) => '|',
        (loopy::NO_LINE, _) => 'x',
        _ => ' ',
    };
    let mut out = String::new();
    for r in 0..=g.height {
        out.push('+');
        for c in 0..g.width {
            out.push_str(horizontal(geo.horizontal(r, c)));
            out.push('+');
        }
        out.push('\n');
        if r == g.height {
            break;
        }
        for c in 0..=g.width {
            out.push(vertical(geo.vertical(r, c)));
            if c < g.width {
                let f = g.index(r, c);
                let clue = faces[f].map_or(' ', |n| char::from(b'0' + n));
                let _ = write!(out, " {clue}{}", mark(viol.meta[f]));
            }
        }
        let len = out.trim_end_matches(' ').len();
        out.truncate(len);
        out.push('\n');
    }
    out
}

/// Each tile is 3x3 characters: arms as `|`/`-`, centre `S` for the source,
/// `*` when connected to it and `o` otherwise.
fn render_net(state: &PuzzleState) -> String {
    let layout = state.layout();
    let g = layout.grid;
    let v = state.values();
    let (_, source) = layout.net_tiles();
    let conn = net::connected_from_source(layout, v).expect("net layout");
    let mut out = String::new();
    for r in 0..g.height {
        let mut lines = [String::new(), String::new(), String::new()];
        for c in 0..g.width {
            let i = g.index(r, c);
            let m = net::connectors(layout, v, i);
            let arm = |d: Dir, s: char| if m & d.bit() != 0 { s } else { ' ' };
            let centre = if i == source {
                'S'
            } else if conn[i] {
                '*'
            } else {
                'o'
            };
            let _ = write!(lines[0], " {} ", arm(Dir::N, '|'));
            let _ = write!(lines[1], "{}{centre}{}", arm(Dir::W, '-'), arm(Dir::E, '-'));
            let _ = write!(lines[2], " {} ", arm(Dir::S, '|'));
        }
        for l in lines {
            out.push_str(l.trim_end());
            out.push('\n');
        }
    }
    out
}

fn render_unruly(state: &PuzzleState) -> String {
    let layout = state.layout();
    let v = state.values();
    cell_rows(
        state,
        |i| {
            let c = match v[i] {
                unruly::WHITE => 'w',
                unruly::BLACK => 'b',
                _ => '.',
            };
            if layout.is_fixed(i) {
                c.to_ascii_uppercase()
            } else {
                c
            }
        },
        |_| String::new(),
    )
}
