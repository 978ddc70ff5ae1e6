//! Record a random-agent episode as a JSON trace and replay it.
//!
//!     cargo run --example record_replay

use graph_puzzles::eval::RandomAgent;
use graph_puzzles::generate::generate;
use graph_puzzles::trace::{record, replay, Trace};
use graph_puzzles::{GridSpec, PuzzleKind, RewardMode};

fn main() -> graph_puzzles::Result<()> {
    let inst = generate(PuzzleKind::Unruly, GridSpec::square(6), 5)?;
    let trace = record(&inst, &mut RandomAgent::default(), RewardMode::Partial, Some(8), 1)?;
    let json = trace.to_json();
    println!("{} steps, return {}, {} bytes of JSON", trace.steps.len(), trace.total_reward(), json.len());
    let again = replay(&Trace::from_json(&json)?)?;
    assert_eq!(again, trace);
    println!("replay matches step for step");
    Ok(())
}
