//! Build the six test sets of one kind and evaluate the built-in agents,
//! printing the report and the CSV.
//!
//!     cargo run --release --example extrapolation_eval -- net

use std::collections::HashSet;

use graph_puzzles::eval::{build_suite, builtin_agent, evaluate_seeds, LocalBackend};
use graph_puzzles::{PuzzleKind, RewardMode};

fn main() -> graph_puzzles::Result<()> {
    let kind: PuzzleKind = std::env::args().nth(1).as_deref().unwrap_or("net").parse()?;
    let suite = build_suite(kind, 2024, &HashSet::new())?;
    for name in ["oracle", "noop", "random"] {
        let mut agent = builtin_agent(name)?;
        let report = evaluate_seeds(agent.as_mut(), std::slice::from_ref(&suite), &mut LocalBackend::default(), &[0, 1, 2], RewardMode::Iterative)?;
        print!("{}", report.to_text());
        if name == "oracle" {
            print!("{}", report.to_csv());
        }
    }
    Ok(())
}
