//! One episode per reward scheme: a random agent for a few steps, then the
//! oracle finishes the board.
//!
//!     cargo run --example play_episode -- tents 6x6

use graph_puzzles::env::{oracle_policy, random_policy};
use graph_puzzles::reward::RewardMode;
use graph_puzzles::{Env, EnvConfig, GridSpec, PuzzleKind};

fn main() -> graph_puzzles::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: PuzzleKind = args.next().as_deref().unwrap_or("tents").parse()?;
    let grid: GridSpec = args.next().as_deref().unwrap_or("6x6").parse()?;
    for mode in RewardMode::ALL {
        let mut env = Env::new(EnvConfig::new(kind, grid).reward_mode(mode))?;
        let mut obs = env.reset(42)?;
        let mut ret = 0.0;
        for t in 0..3 {
            let out = env.step(&random_policy(&obs, t))?;
            ret += out.reward;
            println!("{mode:>9} step {} reward {:>4} Q {:>3} Q~ {:>3}", out.info.step, out.reward, out.info.quality, out.info.masked_quality);
            obs = out.observation;
        }
        let actions = oracle_policy(env.state().unwrap(), env.instance().unwrap());
        let out = env.step(&actions)?;
        ret += out.reward;
        println!("{mode:>9} oracle step: solved {} done {}, return {ret}", out.info.solved, out.done);
    }
    Ok(())
}
