//! Recorded episodes: the instance, the settings and every action vector,
//! with the outcome of each step so a replay can be checked.

use serde::{Deserialize, Serialize};

use crate::env::{Env, EnvConfig};
use crate::error::{Error, Result};
use crate::eval::{Agent, AgentView};
use crate::instance::PuzzleInstance;
use crate::reward::RewardMode;

pub const TRACE_FORMAT: &str = "gp-trace/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub actions: Vec<u8>,
    pub reward: f64,
    pub done: bool,
    pub solved: bool,
    /// Digest of the board after the step.
    pub digest: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub format: String,
    /// Instance record text.
    pub instance: String,
    pub reward_mode: RewardMode,
    pub horizon: usize,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces serialize")
    }

    pub fn from_json(text: &str) -> Result<Trace> {
        let t: Trace = serde_json::from_str(text)?;
        if t.format != TRACE_FORMAT {
            return Err(Error::contract(format!("unknown trace format {:?}", t.format)));
        }
        Ok(t)
    }

    pub fn solved(&self) -> bool {
        self.steps.last().is_some_and(|s| s.solved)
    }

    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }
}

/// Plays one episode with `agent` and records it.
pub fn record(
    instance: &PuzzleInstance,
    agent: &mut dyn Agent,
    mode: RewardMode,
    horizon: Option<usize>,
    episode_seed: u64,
) -> Result<Trace> {
    let config = EnvConfig { reward_mode: mode, horizon, ..EnvConfig::new(instance.kind(), instance.grid()) };
    let mut env = Env::new(config)?;
    let mut obs = env.reset_with(instance.clone())?;
    agent.begin(episode_seed);
    let mut steps = Vec::new();
    loop {
        let values = env.state().expect("episode started").values().to_vec();
        let actions = agent.act(&AgentView { instance, observation: &obs, values: &values });
        let out = env.step(&actions)?;
        steps.push(TraceStep {
            actions,
            reward: out.reward,
            done: out.done,
            solved: out.info.solved,
            digest: env.state().expect("episode started").digest(),
        });
        if out.done {
            break;
        }
        obs = out.observation;
    }
    Ok(Trace {
        format: TRACE_FORMAT.to_string(),
        instance: instance.to_record(),
        reward_mode: mode,
        horizon: env.config().effective_horizon(),
        steps,
    })
}

/// Re-runs a trace and checks every step against the recording. Returns the
/// replayed trace (equal to the input on success).
pub fn replay(trace: &Trace) -> Result<Trace> {
    let instance = PuzzleInstance::parse(&trace.instance)?;
    let config = EnvConfig {
        reward_mode: trace.reward_mode,
        horizon: Some(trace.horizon),
        ..EnvConfig::new(instance.kind(), instance.grid())
    };
    let mut env = Env::new(config)?;
    env.reset_with(instance)?;
    let mut steps = Vec::with_capacity(trace.steps.len());
    for (k, rec) in trace.steps.iter().enumerate() {
        let out = env.step(&rec.actions)?;
        let step = TraceStep {
            actions: rec.actions.clone(),
            reward: out.reward,
            done: out.done,
            solved: out.info.solved,
            digest: env.state().expect("episode started").digest(),
        };
        if &step != rec {
            return Err(Error::contract(format!("replay diverges at step {k}: recorded {rec:?}, got {step:?}")));
        }
        steps.push(step);
    }
    Ok(Trace { steps, ..trace.clone() })
}
