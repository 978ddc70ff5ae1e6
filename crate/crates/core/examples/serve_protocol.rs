//! Start a gp/1 server on a free local port and talk to it with the bundled
//! client: hello, reset, a do-nothing step, a malformed step, close.
//!
//!     cargo run --example serve_protocol

use std::net::TcpListener;
use std::sync::Arc;
use std::thread;

use graph_puzzles::protocol::{serve_listener, Client, ObsMode, ServerConfig};
use serde_json::json;

fn main() -> graph_puzzles::Result<()> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?;
    thread::spawn(move || serve_listener(Arc::new(ServerConfig::default()), listener));

    let mut client = Client::connect(addr)?;
    println!("hello -> {}", client.hello()?);
    let r = client.reset(json!({ "kind": "net", "size": "4x4", "seed": 1 }))?;
    let topo = r.observation.as_ref().and_then(|o| o.topology.as_ref()).expect("full observation");
    println!("reset -> session {}, {} nodes, {} edges, Q = {}", r.session, topo.num_nodes, topo.edges.len(), r.quality);
    let s = client.step(r.session, &vec![3; r.num_decision], ObsMode::None)?;
    println!("noop step -> reward {} done {}", s.reward, s.done);
    match client.step(r.session, &[3, 3], ObsMode::None) {
        Err(e) => println!("short action vector -> {e}"),
        Ok(_) => unreachable!(),
    }
    client.close(r.session)?;
    Ok(())
}
