//! Generate a unique-solution puzzle of every kind, solve it from scratch and
//! print the starting board next to the solution.
//!
//!     cargo run --example generate_and_solve -- 7

use graph_puzzles::generate::{generate, training_size};
use graph_puzzles::render::render;
use graph_puzzles::solver::solve;
use graph_puzzles::{PuzzleKind, PuzzleState};

fn main() -> graph_puzzles::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    for kind in PuzzleKind::ALL {
        let inst = generate(kind, training_size(kind), seed)?;
        let result = solve(&inst.layout, 2)?;
        println!("== {kind} {} seed {seed}: {:?} after {} nodes", inst.grid(), result.verdict, result.nodes);
        assert_eq!(result.solutions[0], inst.solution);
        println!("{}", render(&PuzzleState::initial(&inst)));
        println!("{}", render(&PuzzleState::solved_board(&inst)));
    }
    Ok(())
}
