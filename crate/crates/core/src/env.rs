//! Episodic multi-agent environment: every decision node picks one action per
//! step and all actions land at once.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::generate;
use crate::graph::{self, GraphObservation, Topology};
use crate::instance::PuzzleInstance;
use crate::puzzle::{mix_seed, GridSpec, PuzzleKind};
use crate::reward::{RewardMode, RewardTracker};
use crate::rules::{action_toward, ActionVector, PuzzleState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvConfig {
    pub kind: PuzzleKind,
    pub grid: GridSpec,
    #[serde(default)]
    pub reward_mode: RewardMode,
    /// Steps per episode; defaults to the decision-node count.
    #[serde(default)]
    pub horizon: Option<usize>,
    /// Stream that [`Env::reset_next`] draws episode seeds from.
    #[serde(default)]
    pub seed: u64,
    /// Divide rewards by the decision-node count.
    #[serde(default)]
    pub normalize_reward: bool,
}

impl EnvConfig {
    pub fn new(kind: PuzzleKind, grid: GridSpec) -> Self {
        EnvConfig {
            kind,
            grid,
            reward_mode: RewardMode::default(),
            horizon: None,
            seed: 0,
            normalize_reward: false,
        }
    }

    pub fn reward_mode(mut self, mode: RewardMode) -> Self {
        self.reward_mode = mode;
        self
    }

    pub fn horizon(mut self, horizon: usize) -> Self {
        self.horizon = Some(horizon);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn effective_horizon(&self) -> usize {
        self.horizon.unwrap_or_else(|| self.kind.decision_count(self.grid))
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate(self.grid)?;
        if self.horizon == Some(0) {
            return Err(Error::contract("horizon must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub solved: bool,
    /// Q of the new state.
    pub quality: usize,
    /// Q̃ of the new state.
    pub masked_quality: usize,
    /// Steps taken so far in this episode.
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub observation: GraphObservation,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

struct Episode {
    instance: PuzzleInstance,
    state: PuzzleState,
    tracker: RewardTracker,
    topology: Topology,
    step: usize,
    done: bool,
}

/// One environment. Trains on freshly generated instances, or plays a fixed
/// corpus in eval mode.
pub struct Env {
    config: EnvConfig,
    corpus: Option<Arc<Vec<PuzzleInstance>>>,
    episodes: u64,
    episode: Option<Episode>,
}

impl Env {
    pub fn new(config: EnvConfig) -> Result<Self> {
        config.validate()?;
        Ok(Env { config, corpus: None, episodes: 0, episode: None })
    }

    /// Eval mode: episodes come from `corpus` (all of the config's kind and
    /// size).
    pub fn with_corpus(config: EnvConfig, corpus: Arc<Vec<PuzzleInstance>>) -> Result<Self> {
        config.validate()?;
        if let Some(bad) = corpus.iter().find(|i| i.kind() != config.kind || i.grid() != config.grid) {
            return Err(Error::contract(format!(
                "corpus holds a {} {} instance, environment is {} {}",
                bad.kind(),
                bad.grid(),
                config.kind,
                config.grid
            )));
        }
        Ok(Env { config, corpus: Some(corpus), episodes: 0, episode: None })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    /// New episode on the instance generated from `seed`.
    pub fn reset(&mut self, seed: u64) -> Result<GraphObservation> {
        let instance = generate(self.config.kind, self.config.grid, seed)?;
        self.start(instance)
    }

    /// New episode on the next seed of the config's stream.
    pub fn reset_next(&mut self) -> Result<GraphObservation> {
        let seed = mix_seed(self.config.seed, self.episodes);
        self.reset(seed)
    }

    /// New episode on corpus entry `index` (eval mode only).
    pub fn reset_index(&mut self, index: usize) -> Result<GraphObservation> {
        let corpus = self
            .corpus
            .as_ref()
            .ok_or_else(|| Error::contract("reset by index needs an eval corpus"))?;
        let instance = corpus
            .get(index)
            .cloned()
            .ok_or_else(|| Error::contract(format!("corpus has {} entries, asked for {index}", corpus.len())))?;
        self.start(instance)
    }

    /// New episode on an explicit instance.
    pub fn reset_with(&mut self, instance: PuzzleInstance) -> Result<GraphObservation> {
        if instance.kind() != self.config.kind || instance.grid() != self.config.grid {
            return Err(Error::contract(format!(
                "instance is {} {}, environment is {} {}",
                instance.kind(),
                instance.grid(),
                self.config.kind,
                self.config.grid
            )));
        }
        self.start(instance)
    }

    fn start(&mut self, instance: PuzzleInstance) -> Result<GraphObservation> {
        let state = PuzzleState::initial(&instance);
        let tracker = RewardTracker::new(self.config.reward_mode, &state, &instance.solution)?
            .normalized(self.config.normalize_reward);
        let topology = graph::topology(&instance.layout);
        self.episodes += 1;
        let ep = Episode { instance, state, tracker, topology, step: 0, done: false };
        let obs = observe(&ep);
        self.episode = Some(ep);
        Ok(obs)
    }

    pub fn step(&mut self, actions: &[u8]) -> Result<StepOutcome> {
        let horizon = self.config.effective_horizon();
        let ep = self.episode.as_mut().ok_or_else(|| Error::contract("step before reset"))?;
        if ep.done {
            return Err(Error::contract("episode is done; reset first"));
        }
        let next = ep.state.apply(actions)?;
        let reward = ep.tracker.step(&next, &ep.instance.solution)?;
        ep.state = next;
        ep.step += 1;
        let solved = ep.state.is_solved();
        ep.done = solved || ep.step >= horizon;
        Ok(StepOutcome {
            observation: observe(ep),
            reward,
            done: ep.done,
            info: StepInfo {
                solved,
                quality: ep.tracker.quality(),
                masked_quality: ep.tracker.masked_quality(),
                step: ep.step,
            },
        })
    }

    pub fn state(&self) -> Option<&PuzzleState> {
        self.episode.as_ref().map(|e| &e.state)
    }

    pub fn instance(&self) -> Option<&PuzzleInstance> {
        self.episode.as_ref().map(|e| &e.instance)
    }

    pub fn is_done(&self) -> bool {
        self.episode.as_ref().is_some_and(|e| e.done)
    }

    pub fn steps_taken(&self) -> usize {
        self.episode.as_ref().map_or(0, |e| e.step)
    }

    pub fn tracker(&self) -> Option<&RewardTracker> {
        self.episode.as_ref().map(|e| &e.tracker)
    }
}

fn observe(ep: &Episode) -> GraphObservation {
    let kind = ep.instance.kind();
    GraphObservation {
        kind,
        grid: ep.instance.grid(),
        topology: ep.topology.clone(),
        feature_width: kind.feature_width(),
        features: graph::node_features(&ep.state),
        num_actions: kind.num_actions(),
    }
}

/// Per cell, the action that moves it towards its solution value.
pub fn oracle_policy(state: &PuzzleState, instance: &PuzzleInstance) -> ActionVector {
    let layout = &instance.layout;
    state
        .values()
        .iter()
        .zip(&instance.solution)
        .enumerate()
        .map(|(i, (&v, &t))| action_toward(layout, i, v, t))
        .collect()
}

/// DO NOTHING on every decision node.
pub fn noop_policy(obs: &GraphObservation) -> ActionVector {
    vec![obs.kind.noop_action(); obs.topology.decision_nodes]
}

/// Independent uniform actions, reproducible from `seed`.
pub fn random_policy(obs: &GraphObservation, seed: u64) -> ActionVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..obs.topology.decision_nodes)
        .map(|_| rng.gen_range(0..obs.num_actions) as u8)
        .collect()
}

/// `k` independent environments stepped together.
pub struct VecEnv {
    envs: Vec<Env>,
}

impl VecEnv {
    pub fn new(config: EnvConfig, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::contract("a vectorised environment needs k >= 1"));
        }
        let envs = (0..k)
            .map(|i| Env::new(EnvConfig { seed: mix_seed(config.seed, i as u64), ..config.clone() }))
            .collect::<Result<_>>()?;
        Ok(VecEnv { envs })
    }

    pub fn len(&self) -> usize {
        self.envs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envs.is_empty()
    }

    pub fn envs(&self) -> &[Env] {
        &self.envs
    }

    pub fn reset(&mut self, seeds: &[u64]) -> Result<Vec<GraphObservation>> {
        self.check(seeds.len())?;
        self.envs.iter_mut().zip(seeds).map(|(e, &s)| e.reset(s)).collect()
    }

    pub fn step(&mut self, actions: &[ActionVector]) -> Result<Vec<StepOutcome>> {
        self.check(actions.len())?;
        self.envs.iter_mut().zip(actions).map(|(e, a)| e.step(a)).collect()
    }

    fn check(&self, got: usize) -> Result<()> {
        if got != self.envs.len() {
            return Err(Error::contract(format!("batch of {got} for {} environments", self.envs.len())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_solves_in_one_step() {
        for kind in PuzzleKind::ALL {
            let grid = crate::generate::training_size(kind);
            let mut env = Env::new(EnvConfig::new(kind, grid)).unwrap();
            env.reset(3).unwrap();
            let q0 = env.tracker().unwrap().quality();
            let a = oracle_policy(env.state().unwrap(), env.instance().unwrap());
            let out = env.step(&a).unwrap();
            assert!(out.done && out.info.solved, "{kind}");
            assert_eq!(out.reward, (kind.decision_count(grid) - q0) as f64);
            assert!(env.step(&a).is_err());
        }
    }

    #[test]
    fn horizon_ends_episode() {
        let mut env = Env::new(EnvConfig::new(PuzzleKind::Net, GridSpec::square(4)).horizon(2)).unwrap();
        let obs = env.reset(1).unwrap();
        let noop = noop_policy(&obs);
        assert!(!env.step(&noop).unwrap().done);
        let out = env.step(&noop).unwrap();
        assert!(out.done && !out.info.solved);
        assert_eq!(out.reward, 0.0);
    }

    #[test]
    fn zero_horizon_is_rejected() {
        assert!(Env::new(EnvConfig::new(PuzzleKind::Net, GridSpec::square(4)).horizon(0)).is_err());
    }
}
