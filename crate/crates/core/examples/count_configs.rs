//! Distinct configurations among instances from seeds 0..samples.
//!
//!     cargo run --release --example count_configs -- net 3x3 500000

use graph_puzzles::generate::count_distinct;
use graph_puzzles::{GridSpec, PuzzleKind};

fn main() -> graph_puzzles::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: PuzzleKind = args.next().as_deref().unwrap_or("net").parse()?;
    let grid: GridSpec = args.next().as_deref().unwrap_or("3x3").parse()?;
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let n = count_distinct(kind, grid, samples)?;
    println!("{kind} {grid}: {n} distinct in {samples} samples");
    Ok(())
}
