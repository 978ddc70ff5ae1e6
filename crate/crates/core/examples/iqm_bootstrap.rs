//! Interquartile mean with a stratified bootstrap interval.
//!
//!     cargo run --example iqm_bootstrap

use graph_puzzles::eval::{iqm, iqm_ci, iqm_ci_stratified, DEFAULT_REPLICATES};

fn main() -> graph_puzzles::Result<()> {
    println!("IQM {{0,0,100,100}} = {}", iqm(&[0.0, 0.0, 100.0, 100.0])?);
    println!("constant 80s: {:?}", iqm_ci(&[80.0; 8], DEFAULT_REPLICATES, 0)?);
    let per_kind = vec![vec![98.0, 100.0, 96.0], vec![40.0, 52.0, 46.0], vec![0.0, 2.0, 0.0], vec![88.0, 90.0, 94.0]];
    let ci = iqm_ci_stratified(&per_kind, DEFAULT_REPLICATES, 0)?;
    println!("four kinds x three seeds: IQM {:.2} CI [{:.2}, {:.2}]", ci.iqm, ci.lower, ci.upper);
    Ok(())
}
