//! Encode a board as a graph and compare the counts with the closed forms.
//!
//!     cargo run --example graph_observation -- loopy 4x4

use graph_puzzles::graph::{encode, TopologySpec};
use graph_puzzles::{generate::generate, GridSpec, PuzzleKind, PuzzleState};

fn main() -> graph_puzzles::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: PuzzleKind = args.next().as_deref().unwrap_or("loopy").parse()?;
    let grid: GridSpec = args.next().as_deref().unwrap_or("4x4").parse()?;
    let inst = generate(kind, grid, 1)?;
    let obs = encode(&PuzzleState::initial(&inst));
    let spec = TopologySpec::of(kind, grid);
    println!("{kind} {grid}: {} decision + {} meta nodes, {} directed edges", obs.topology.decision_nodes, obs.topology.meta_nodes, obs.topology.edges.len());
    println!("closed form:  {} decision + {} meta nodes, {} directed edges", spec.decision_nodes, spec.meta_nodes, spec.directed_edges);
    println!("feature width {}, {} actions per node", obs.feature_width, obs.num_actions);
    for node in [0, obs.node_count() - 1] {
        let edges: Vec<_> = obs.topology.edges.iter().zip(&obs.topology.edge_dirs).filter(|(e, _)| e[0] as usize == node).map(|(e, d)| (e[1], *d)).collect();
        println!("node {node}: features {:?}", obs.row(node));
        println!("  out-edges {edges:?}");
    }
    Ok(())
}
