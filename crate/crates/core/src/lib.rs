//! Graph-structured, multi-agent environments for six size-scalable logic
//! puzzles (Tents, Light Up, Mosaic, Loopy, Net, Unruly).
//!
//! Every puzzle is exposed as a graph whose decision nodes are the atomic
//! cells of the board. All decision nodes act simultaneously each step, so a
//! single policy network can be trained on small boards and evaluated on
//! boards many times larger.
//!
//! The crate is organised bottom-up:
//!
//! * [`puzzle`] and [`instance`]: identifiers, grid geometry, canonical state
//!   sequences, digests and the instance text format.
//! * [`rules`]: the six rule engines (actions, violations, solved checks).
//! * [`solver`] and [`generate`]: exact uniqueness-checking solver and
//!   unique-solution generators.
//! * [`graph`]: the agent-facing graph observation.
//! * [`reward`]: sparse, iterative and partial reward schemes.
//! * [`env`]: the episodic environment, reference policies and a vectorized
//!   wrapper.
//! * [`eval`]: extrapolation test suites, IQM and bootstrap intervals.
//! * [`protocol`]: the `gp/1` line protocol, server and client.

pub mod env;
pub mod error;
pub mod eval;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod protocol;
pub mod puzzle;
pub mod render;
pub mod reward;
pub mod rules;
pub mod solver;
pub mod trace;

pub use error::{Error, Result};
pub use instance::{Clues, Layout, PuzzleInstance};
pub use puzzle::{GridSpec, PuzzleKind};
pub use rules::PuzzleState;
pub use env::{Env, EnvConfig, StepOutcome};
pub use graph::GraphObservation;
pub use reward::RewardMode;
