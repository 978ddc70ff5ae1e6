//! Puzzle layouts, generated instances and the line-oriented instance format.
//!
//! A record looks like this (one field per line, fixed order):
//!
//! ```text
//! format_version: 1
//! kind: tents
//! width: 5
//! height: 5
//! seed: 7
//! fixed_cells: ....3.3......3....3.....3
//! clues: rows=1,1,0,2,1;cols=2,0,1,1,1
//! solution: 1121313121...
//! end
//! ```
//!
//! `fixed_cells` and `solution` hold one character per decision node in
//! canonical order (`.` marks a free cell). The `clues` syntax depends on the
//! kind: `rows=..;cols=..` for Tents, one character per cell (`.` or a digit)
//! for Light Up, Mosaic and Loopy faces, `source=N;tiles=HEX` for Net and `-`
//! for Unruly.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::puzzle::{Fnv64, GridSpec, PuzzleKind, StateSequence};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Clues {
    Tents { rows: Vec<u8>, cols: Vec<u8> },
    /// Numbers on black squares, indexed by cell.
    Lightup { numbers: Vec<Option<u8>> },
    Mosaic { numbers: Vec<Option<u8>> },
    /// Face clues in row-major order.
    Loopy { faces: Vec<Option<u8>> },
    /// Connector masks (N=1, E=2, S=4, W=8) as presented at orientation 0.
    Net { tiles: Vec<u8>, source: usize },
    Unruly,
}

/// The static part of a puzzle: everything a player sees except cell values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    pub kind: PuzzleKind,
    pub grid: GridSpec,
    /// Fixed value per decision node (trees, black squares, givens).
    pub fixed: Vec<Option<u8>>,
    pub clues: Clues,
}

impl Layout {
    pub fn decision_count(&self) -> usize {
        self.kind.decision_count(self.grid)
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed[i].is_some()
    }

    /// Values at episode start: fixed values, zero elsewhere.
    pub fn initial_values(&self) -> StateSequence {
        self.fixed.iter().map(|f| f.unwrap_or(0)).collect()
    }

    pub fn digest(&self) -> u64 {
        let mut h = Fnv64::default();
        h.write(self.kind.name().as_bytes());
        h.write_u64(self.grid.width as u64);
        h.write_u64(self.grid.height as u64);
        h.write(&[0xff]);
        h.write(self.fixed_field().as_bytes());
        h.write(&[0xff]);
        h.write(self.clues_field().as_bytes());
        h.finish()
    }

    fn fixed_field(&self) -> String {
        self.fixed
            .iter()
            .map(|f| f.map_or('.', |v| char::from(b'0' + v)))
            .collect()
    }

    fn clues_field(&self) -> String {
        let cells = |v: &[Option<u8>]| -> String {
            v.iter().map(|c| c.map_or('.', |n| char::from(b'0' + n))).collect()
        };
        let list = |v: &[u8]| v.iter().map(u8::to_string).collect::<Vec<_>>().join(",");
        match &self.clues {
            Clues::Tents { rows, cols } => format!("rows={};cols={}", list(rows), list(cols)),
            Clues::Lightup { numbers } | Clues::Mosaic { numbers } => cells(numbers),
            Clues::Loopy { faces } => cells(faces),
            Clues::Net { tiles, source } => {
                let hex: String = tiles
                    .iter()
                    .map(|&t| char::from_digit(u32::from(t), 16).unwrap_or('?'))
                    .collect();
                format!("source={source};tiles={hex}")
            }
            Clues::Unruly => "-".to_string(),
        }
    }

    pub fn net_tiles(&self) -> (&[u8], usize) {
        match &self.clues {
            Clues::Net { tiles, source } => (tiles, *source),
            _ => panic!("net_tiles on a {} layout", self.kind),
        }
    }
}

/// A generated puzzle together with its unique solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuzzleInstance {
    pub seed: u64,
    pub layout: Arc<Layout>,
    pub solution: StateSequence,
}

impl PuzzleInstance {
    pub fn kind(&self) -> PuzzleKind {
        self.layout.kind
    }

    pub fn grid(&self) -> GridSpec {
        self.layout.grid
    }

    /// Digest identifying the puzzle configuration. For Net the scramble is
    /// not part of the configuration: two instances with the same solved
    /// network and source are the same puzzle.
    pub fn config_digest(&self) -> u64 {
        match &self.layout.clues {
            Clues::Net { tiles, source } => {
                let mut h = Fnv64::default();
                h.write(b"net");
                h.write_u64(self.grid().width as u64);
                h.write_u64(self.grid().height as u64);
                h.write_u64(*source as u64);
                for (&t, &o) in tiles.iter().zip(&self.solution) {
                    h.write(&[crate::rules::net::rotate(t, o)]);
                }
                h.finish()
            }
            _ => self.layout.digest(),
        }
    }

    pub fn to_record(&self) -> String {
        let mut out = String::new();
        let l = &self.layout;
        let _ = writeln!(out, "format_version: {FORMAT_VERSION}");
        let _ = writeln!(out, "kind: {}", l.kind);
        let _ = writeln!(out, "width: {}", l.grid.width);
        let _ = writeln!(out, "height: {}", l.grid.height);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "fixed_cells: {}", l.fixed_field());
        let _ = writeln!(out, "clues: {}", l.clues_field());
        let sol: String = self.solution.iter().map(|&v| char::from(b'0' + v)).collect();
        let _ = writeln!(out, "solution: {sol}");
        out.push_str("end\n");
        out
    }

    /// Parses exactly one record.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut records = parse_corpus(text)?;
        match records.len() {
            1 => Ok(records.remove(0)),
            0 => Err(ParseError::new("format_version", 0, "empty input")),
            n => Err(ParseError::new(
                "end",
                text.len(),
                format!("expected one record, found {n}"),
            )),
        }
    }
}

impl fmt::Display for PuzzleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_record())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error in field `{field}` at byte {offset}: {message}")]
pub struct ParseError {
    pub field: String,
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(field: &str, offset: usize, message: impl Into<String>) -> Self {
        ParseError { field: field.to_string(), offset, message: message.into() }
    }
}

pub fn write_corpus(instances: &[PuzzleInstance]) -> String {
    instances.iter().map(PuzzleInstance::to_record).collect()
}

/// Parses a sequence of records. Blank lines between records are ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<PuzzleInstance>, ParseError> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while lines.skip_blank() {
        out.push(parse_record(&mut lines)?);
    }
    Ok(out)
}

struct Lines<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { text, pos: 0 }
    }

    /// Skips blank lines; returns whether anything remains.
    fn skip_blank(&mut self) -> bool {
        loop {
            let rest = &self.text[self.pos..];
            if rest.is_empty() {
                return false;
            }
            let line_len = rest.find('\n').map_or(rest.len(), |i| i + 1);
            if !rest[..line_len].trim().is_empty() {
                return true;
            }
            self.pos += line_len;
        }
    }

    /// Returns `(line content, byte offset of the line start)`.
    fn next(&mut self, field: &str) -> Result<(&'a str, usize), ParseError> {
        let start = self.pos;
        let rest = &self.text[start..];
        if rest.is_empty() {
            return Err(ParseError::new(field, start, "unexpected end of input"));
        }
        let (line, len) = match rest.find('\n') {
            Some(i) => (&rest[..i], i + 1),
            None => (rest, rest.len()),
        };
        self.pos += len;
        Ok((line.trim_end_matches('\r'), start))
    }

    /// Reads `field: value`, returning the value and its byte offset.
    fn field(&mut self, field: &str) -> Result<(&'a str, usize), ParseError> {
        let (line, start) = self.next(field)?;
        let Some(rest) = line.strip_prefix(field).and_then(|r| r.strip_prefix(':')) else {
            return Err(ParseError::new(field, start, format!("expected `{field}:`")));
        };
        let trimmed = rest.trim_start();
        let offset = start + field.len() + 1 + (rest.len() - trimmed.len());
        Ok((trimmed.trim_end(), offset))
    }
}

fn parse_num<T: std::str::FromStr>(field: &str, value: &str, offset: usize) -> Result<T, ParseError> {
    value
        .parse()
        .map_err(|_| ParseError::new(field, offset, format!("invalid number {value:?}")))
}

fn parse_record(lines: &mut Lines<'_>) -> Result<PuzzleInstance, ParseError> {
    let (v, off) = lines.field("format_version")?;
    let version: u32 = parse_num("format_version", v, off)?;
    if version != FORMAT_VERSION {
        return Err(ParseError::new(
            "format_version",
            off,
            format!("unsupported version {version}"),
        ));
    }
    let (v, off) = lines.field("kind")?;
    let kind: PuzzleKind = v
        .parse()
        .map_err(|_| ParseError::new("kind", off, format!("unknown puzzle kind {v:?}")))?;
    let (v, off) = lines.field("width")?;
    let width: usize = parse_num("width", v, off)?;
    let (v, off) = lines.field("height")?;
    let height: usize = parse_num("height", v, off)?;
    let grid = GridSpec::new(width, height);
    kind.validate(grid)
        .map_err(|e| ParseError::new("height", off, e.to_string()))?;
    let (v, off) = lines.field("seed")?;
    let seed: u64 = parse_num("seed", v, off)?;

    let n = kind.decision_count(grid);
    let m = kind.num_values() as u8;

    let (v, off) = lines.field("fixed_cells")?;
    let fixed = parse_cells("fixed_cells", v, off, n, m)?;

    let (v, off) = lines.field("clues")?;
    let clues = parse_clues(kind, grid, v, off)?;

    let (v, off) = lines.field("solution")?;
    let solution: Vec<u8> = parse_cells("solution", v, off, n, m)?
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| ParseError::new("solution", off + i, "solution cell missing")))
        .collect::<Result<_, _>>()?;
    for (i, (f, s)) in fixed.iter().zip(&solution).enumerate() {
        if let Some(f) = f {
            if f != s {
                return Err(ParseError::new(
                    "solution",
                    off + i,
                    "solution disagrees with a fixed cell",
                ));
            }
        }
    }

    if let Clues::Net { tiles, .. } = &clues {
        for (i, (&t, &o)) in tiles.iter().zip(&solution).enumerate() {
            if o >= crate::rules::net::period(t) {
                return Err(ParseError::new(
                    "solution",
                    off + i,
                    "orientation beyond the tile's rotational period",
                ));
            }
        }
    }

    let (line, off) = lines.next("end")?;
    if line.trim() != "end" {
        return Err(ParseError::new("end", off, "expected `end`"));
    }

    Ok(PuzzleInstance {
        seed,
        layout: Arc::new(Layout { kind, grid, fixed, clues }),
        solution,
    })
}

fn parse_cells(
    field: &str,
    value: &str,
    offset: usize,
    len: usize,
    max: u8,
) -> Result<Vec<Option<u8>>, ParseError> {
    if value.len() != len {
        return Err(ParseError::new(
            field,
            offset,
            format!("expected {len} cells, found {}", value.len()),
        ));
    }
    value
        .bytes()
        .enumerate()
        .map(|(i, b)| match b {
            b'.' => Ok(None),
            b'0'..=b'9' if b - b'0' < max => Ok(Some(b - b'0')),
            _ => Err(ParseError::new(field, offset + i, format!("bad cell {:?}", char::from(b)))),
        })
        .collect()
}

fn parse_digit_cells(
    value: &str,
    offset: usize,
    len: usize,
    max: u8,
) -> Result<Vec<Option<u8>>, ParseError> {
    parse_cells("clues", value, offset, len, max + 1)
}

fn parse_clues(kind: PuzzleKind, grid: GridSpec, v: &str, off: usize) -> Result<Clues, ParseError> {
    let err = |at: usize, msg: &str| ParseError::new("clues", off + at, msg);
    match kind {
        PuzzleKind::Tents => {
            let rest = v.strip_prefix("rows=").ok_or_else(|| err(0, "expected rows="))?;
            let (rows, cols) = rest.split_once(";cols=").ok_or_else(|| err(0, "expected ;cols="))?;
            let list = |s: &str, at: usize, len: usize| -> Result<Vec<u8>, ParseError> {
                let out: Vec<u8> = s
                    .split(',')
                    .map(|t| t.parse::<u8>().map_err(|_| err(at, "bad tent count")))
                    .collect::<Result<_, _>>()?;
                if out.len() != len {
                    return Err(err(at, "wrong number of tent counts"));
                }
                Ok(out)
            };
            let rows_v = list(rows, 5, grid.height)?;
            let cols_v = list(cols, 5 + rows.len() + 6, grid.width)?;
            Ok(Clues::Tents { rows: rows_v, cols: cols_v })
        }
        PuzzleKind::Lightup => Ok(Clues::Lightup { numbers: parse_digit_cells(v, off, grid.cells(), 4)? }),
        PuzzleKind::Mosaic => Ok(Clues::Mosaic { numbers: parse_digit_cells(v, off, grid.cells(), 9)? }),
        PuzzleKind::Loopy => Ok(Clues::Loopy { faces: parse_digit_cells(v, off, grid.cells(), 4)? }),
        PuzzleKind::Net => {
            let rest = v.strip_prefix("source=").ok_or_else(|| err(0, "expected source="))?;
            let (src, tiles) = rest.split_once(";tiles=").ok_or_else(|| err(7, "expected ;tiles="))?;
            let source: usize = src.parse().map_err(|_| err(7, "bad source index"))?;
            if source >= grid.cells() {
                return Err(err(7, "source outside grid"));
            }
            let tiles_at = 7 + src.len() + 7;
            if tiles.len() != grid.cells() {
                return Err(err(tiles_at, "wrong number of tiles"));
            }
            let tiles = tiles
                .chars()
                .enumerate()
                .map(|(i, c)| {
                    c.to_digit(16)
                        .map(|d| d as u8)
                        .filter(|&d| d != 0)
                        .ok_or_else(|| err(tiles_at + i, "bad tile"))
                })
                .collect::<Result<_, _>>()?;
            Ok(Clues::Net { tiles, source })
        }
        PuzzleKind::Unruly => {
            if v != "-" {
                return Err(err(0, "unruly takes no clues"));
            }
            Ok(Clues::Unruly)
        }
    }
}
