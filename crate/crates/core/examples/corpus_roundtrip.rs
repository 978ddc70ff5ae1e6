//! Write a corpus in the text format, read it back and compare.
//!
//!     cargo run --example corpus_roundtrip

use graph_puzzles::generate::generate_many;
use graph_puzzles::instance::{parse_corpus, write_corpus};
use graph_puzzles::{GridSpec, PuzzleKind};

fn main() -> graph_puzzles::Result<()> {
    let corpus = generate_many(PuzzleKind::Mosaic, GridSpec::square(4), 100, 3)?;
    let text = write_corpus(&corpus);
    print!("{text}");
    let back = parse_corpus(&text)?;
    assert_eq!(back, corpus);
    println!("# {} records round-tripped", back.len());
    let broken = &text[..text.len() / 2];
    if let Err(e) = parse_corpus(broken) {
        println!("# truncated corpus: {e}");
    }
    Ok(())
}
