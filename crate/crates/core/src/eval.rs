//! Size-extrapolation suites, agent evaluation and IQM reporting.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{oracle_policy, Env, EnvConfig};
use crate::error::{Error, Result};
use crate::generate::generate;
use crate::graph::GraphObservation;
use crate::instance::PuzzleInstance;
use crate::puzzle::{mix_seed, GridSpec, PuzzleKind};
use crate::reward::RewardMode;
use crate::rules::{ActionVector, PuzzleState};

/// Instances per test set.
pub const SET_SIZE: usize = 50;

/// Bootstrap resamples used when none are given.
pub const DEFAULT_REPLICATES: usize = 2000;

pub const SIZE_LABELS: [&str; 6] = ["train", "+1", "+2", "x4", "x9", "x16"];

/// Test sizes in [`SIZE_LABELS`] order.
pub fn suite_sizes(kind: PuzzleKind) -> [GridSpec; 6] {
    let sides = match kind {
        PuzzleKind::Tents => [5, 6, 7, 10, 15, 20],
        PuzzleKind::Lightup => [6, 6, 7, 10, 15, 20],
        PuzzleKind::Mosaic | PuzzleKind::Loopy | PuzzleKind::Net => [4, 5, 6, 8, 12, 16],
        PuzzleKind::Unruly => [6, 8, 10, 12, 18, 24],
    };
    sides.map(GridSpec::square)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestSet {
    pub kind: PuzzleKind,
    pub grid: GridSpec,
    pub label: &'static str,
    pub instances: Vec<PuzzleInstance>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestSuite {
    pub kind: PuzzleKind,
    pub sets: Vec<TestSet>,
}

/// Builds the six frozen test sets of a kind. Instances within a set are
/// distinct, and none shares a configuration digest with `exclude` (for
/// example the digests of a training corpus).
pub fn build_suite(kind: PuzzleKind, master_seed: u64, exclude: &HashSet<u64>) -> Result<TestSuite> {
    let sets = suite_sizes(kind)
        .into_iter()
        .zip(SIZE_LABELS)
        .enumerate()
        .map(|(j, (grid, label))| {
            let stream = mix_seed(master_seed, j as u64);
            build_set(kind, grid, label, stream, exclude)
        })
        .collect::<Result<_>>()?;
    Ok(TestSuite { kind, sets })
}

fn build_set(
    kind: PuzzleKind,
    grid: GridSpec,
    label: &'static str,
    stream: u64,
    exclude: &HashSet<u64>,
) -> Result<TestSet> {
    let mut seen = HashSet::new();
    let mut instances = Vec::with_capacity(SET_SIZE);
    let limit = (SET_SIZE * 1000) as u64;
    for k in 0..limit {
        if instances.len() == SET_SIZE {
            break;
        }
        let inst = generate(kind, grid, mix_seed(stream, k))?;
        let d = inst.config_digest();
        if !exclude.contains(&d) && seen.insert(d) {
            instances.push(inst);
        }
    }
    if instances.len() < SET_SIZE {
        return Err(Error::contract(format!(
            "only {} distinct {kind} {grid} instances outside the excluded set",
            instances.len()
        )));
    }
    Ok(TestSet { kind, grid, label, instances })
}

/// What an agent sees each step. The instance is there so that test agents
/// can cheat; learning agents should only read the observation.
pub struct AgentView<'a> {
    pub instance: &'a PuzzleInstance,
    pub observation: &'a GraphObservation,
    /// Canonical sequence of the current board.
    pub values: &'a [u8],
}

pub trait Agent {
    fn name(&self) -> &str;

    /// Called before every episode.
    fn begin(&mut self, _episode_seed: u64) {}

    fn act(&mut self, view: &AgentView<'_>) -> ActionVector;

    /// Whether `act` reads node features. Agents that do not are shown the
    /// reset observation for the whole episode, which lets remote backends
    /// skip sending features.
    fn observes(&self) -> bool {
        true
    }
}

/// Writes the solution everywhere.
#[derive(Clone, Copy, Debug, Default)]
pub struct OracleAgent;

impl Agent for OracleAgent {
    fn name(&self) -> &str {
        "oracle"
    }

    fn act(&mut self, view: &AgentView<'_>) -> ActionVector {
        let state = PuzzleState::new(view.instance.layout.clone(), view.values.to_vec())
            .expect("backend reported a valid board");
        oracle_policy(&state, view.instance)
    }

    fn observes(&self) -> bool {
        false
    }
}

/// Never touches the board.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoopAgent;

impl Agent for NoopAgent {
    fn name(&self) -> &str {
        "noop"
    }

    fn act(&mut self, view: &AgentView<'_>) -> ActionVector {
        crate::env::noop_policy(view.observation)
    }

    fn observes(&self) -> bool {
        false
    }
}

/// Uniform random actions, seeded per episode.
#[derive(Clone, Debug)]
pub struct RandomAgent {
    rng: ChaCha8Rng,
}

impl Default for RandomAgent {
    fn default() -> Self {
        RandomAgent { rng: ChaCha8Rng::seed_from_u64(0) }
    }
}

impl Agent for RandomAgent {
    fn name(&self) -> &str {
        "random"
    }

    fn begin(&mut self, episode_seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(episode_seed);
    }

    fn act(&mut self, view: &AgentView<'_>) -> ActionVector {
        let na = view.observation.num_actions;
        (0..view.observation.topology.decision_nodes)
            .map(|_| self.rng.gen_range(0..na) as u8)
            .collect()
    }
}

pub fn builtin_agent(name: &str) -> Result<Box<dyn Agent>> {
    match name {
        "oracle" => Ok(Box::new(OracleAgent)),
        "noop" => Ok(Box::new(NoopAgent)),
        "random" => Ok(Box::new(RandomAgent::default())),
        _ => Err(Error::contract(format!("unknown agent {name:?} (oracle, noop, random)"))),
    }
}

/// Board after a reset or step, as reported by a backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Observed {
    pub observation: GraphObservation,
    pub values: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stepped {
    pub observed: Observed,
    pub reward: f64,
    pub done: bool,
    pub solved: bool,
}

/// Where episodes are played: in process, or behind the protocol server.
pub trait Backend {
    fn reset(&mut self, instance: &PuzzleInstance, mode: RewardMode, horizon: Option<usize>) -> Result<Observed>;

    /// With `observe` false the returned observation may be stale.
    fn step(&mut self, actions: &[u8], observe: bool) -> Result<Stepped>;
}

/// Plays episodes on an in-process [`Env`].
#[derive(Default)]
pub struct LocalBackend {
    env: Option<Env>,
}

impl Backend for LocalBackend {
    fn reset(&mut self, instance: &PuzzleInstance, mode: RewardMode, horizon: Option<usize>) -> Result<Observed> {
        let config = EnvConfig { reward_mode: mode, horizon, ..EnvConfig::new(instance.kind(), instance.grid()) };
        let mut env = Env::new(config)?;
        let observation = env.reset_with(instance.clone())?;
        let values = env.state().expect("episode started").values().to_vec();
        self.env = Some(env);
        Ok(Observed { observation, values })
    }

    fn step(&mut self, actions: &[u8], _observe: bool) -> Result<Stepped> {
        let env = self.env.as_mut().ok_or_else(|| Error::contract("step before reset"))?;
        let out = env.step(actions)?;
        let values = env.state().expect("episode started").values().to_vec();
        Ok(Stepped {
            observed: Observed { observation: out.observation, values },
            reward: out.reward,
            done: out.done,
            solved: out.info.solved,
        })
    }
}

/// Plays one episode to the end; returns whether it was solved.
pub fn run_episode(
    backend: &mut dyn Backend,
    agent: &mut dyn Agent,
    instance: &PuzzleInstance,
    mode: RewardMode,
    horizon: Option<usize>,
    episode_seed: u64,
) -> Result<bool> {
    agent.begin(episode_seed);
    let mut cur = backend.reset(instance, mode, horizon)?;
    loop {
        let actions = agent.act(&AgentView {
            instance,
            observation: &cur.observation,
            values: &cur.values,
        });
        let s = backend.step(&actions, agent.observes())?;
        if s.done {
            return Ok(s.solved);
        }
        cur = s.observed;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRow {
    pub kind: PuzzleKind,
    pub grid: GridSpec,
    pub label: String,
    pub seed: u64,
    pub solved: usize,
    pub played: usize,
    /// Episodes that could not be played (backend lost).
    pub missing: usize,
}

impl EvalRow {
    pub fn solved_percent(&self) -> Option<f64> {
        (self.missing == 0 && self.played > 0).then(|| 100.0 * self.solved as f64 / self.played as f64)
    }
}

/// Plays every instance of every set once. A backend error ends the run; the
/// unplayed episodes are reported as missing.
pub fn evaluate(
    agent: &mut dyn Agent,
    suites: &[TestSuite],
    backend: &mut dyn Backend,
    seed: u64,
    mode: RewardMode,
) -> Vec<EvalRow> {
    let mut rows = Vec::new();
    let mut lost = false;
    for suite in suites {
        for set in &suite.sets {
            let mut row = EvalRow {
                kind: set.kind,
                grid: set.grid,
                label: set.label.to_string(),
                seed,
                solved: 0,
                played: 0,
                missing: 0,
            };
            for (k, inst) in set.instances.iter().enumerate() {
                if lost {
                    row.missing += 1;
                    continue;
                }
                let episode_seed = mix_seed(seed, inst.config_digest() ^ k as u64);
                match run_episode(backend, agent, inst, mode, None, episode_seed) {
                    Ok(solved) => {
                        row.played += 1;
                        row.solved += usize::from(solved);
                    }
                    Err(_) => {
                        lost = true;
                        row.missing += 1;
                    }
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Interquartile mean: drops `floor(k/4)` samples from each end.
pub fn iqm(samples: &[f64]) -> Result<f64> {
    if samples.len() < 4 {
        return Err(Error::contract(format!("IQM needs at least 4 samples, got {}", samples.len())));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::contract("IQM of NaN"));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let cut = s.len() / 4;
    let mid = &s[cut..s.len() - cut];
    Ok(mid.iter().sum::<f64>() / mid.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IqmCi {
    pub iqm: f64,
    pub lower: f64,
    pub upper: f64,
}

/// IQM with a 95% percentile-bootstrap interval; each replicate resamples
/// every stratum with replacement at its own size.
pub fn iqm_ci_stratified(strata: &[Vec<f64>], replicates: usize, seed: u64) -> Result<IqmCi> {
    let pooled: Vec<f64> = strata.iter().flatten().copied().collect();
    let point = iqm(&pooled)?;
    if replicates == 0 {
        return Err(Error::contract("bootstrap needs at least one replicate"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = Vec::with_capacity(replicates);
    let mut buf = Vec::with_capacity(pooled.len());
    for _ in 0..replicates {
        buf.clear();
        for s in strata.iter().filter(|s| !s.is_empty()) {
            buf.extend((0..s.len()).map(|_| s[rng.gen_range(0..s.len())]));
        }
        stats.push(iqm(&buf)?);
    }
    stats.sort_by(f64::total_cmp);
    // keep the interval around the point estimate even when resampling
    // noise would place it just outside
    let lower = percentile(&stats, 0.025).min(point);
    let upper = percentile(&stats, 0.975).max(point);
    Ok(IqmCi { iqm: point, lower, upper })
}

/// Unstratified [`iqm_ci_stratified`].
pub fn iqm_ci(samples: &[f64], replicates: usize, seed: u64) -> Result<IqmCi> {
    iqm_ci_stratified(&[samples.to_vec()], replicates, seed)
}

/// Linear-interpolated percentile of sorted data.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub label: String,
    pub samples: usize,
    pub ci: IqmCi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub agent: String,
    pub rows: Vec<EvalRow>,
    /// Per size label: IQM of solved-% over (kind, seed), stratified by kind.
    /// Labels with fewer than four complete samples are left out.
    pub aggregates: Vec<Aggregate>,
}

impl EvalReport {
    pub fn new(agent: &str, rows: Vec<EvalRow>, replicates: usize, bootstrap_seed: u64) -> Result<Self> {
        let mut aggregates = Vec::new();
        for label in SIZE_LABELS {
            let mut strata: BTreeMap<PuzzleKind, Vec<f64>> = BTreeMap::new();
            for r in rows.iter().filter(|r| r.label == label) {
                if let Some(p) = r.solved_percent() {
                    strata.entry(r.kind).or_default().push(p);
                }
            }
            let strata: Vec<Vec<f64>> = strata.into_values().collect();
            let n: usize = strata.iter().map(Vec::len).sum();
            if n >= 4 {
                let ci = iqm_ci_stratified(&strata, replicates, bootstrap_seed)?;
                aggregates.push(Aggregate { label: label.to_string(), samples: n, ci });
            }
        }
        Ok(EvalReport { agent: agent.to_string(), rows, aggregates })
    }

    /// `kind,size,seed,solved`; `solved` is `NA` when episodes are missing.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,size,seed,solved\n");
        for r in &self.rows {
            let solved = if r.missing > 0 { "NA".to_string() } else { r.solved.to_string() };
            let _ = writeln!(out, "{},{},{},{}", r.kind, r.grid, r.seed, solved);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("agent {}\n", self.agent);
        for r in &self.rows {
            let _ = write!(out, "{:<8}{:>6} {:<6} seed {:<4} solved {:>2}/{}", r.kind.name(), r.grid.to_string(), r.label, r.seed, r.solved, r.played + r.missing);
            if r.missing > 0 {
                let _ = write!(out, " ({} missing)", r.missing);
            }
            out.push('\n');
        }
        for a in &self.aggregates {
            let _ = writeln!(
                out,
                "IQM {:<6} {:6.2}%  95% CI [{:.2}, {:.2}]  over {} runs",
                a.label, a.ci.iqm, a.ci.lower, a.ci.upper, a.samples
            );
        }
        out
    }
}

/// Runs `agent` once per seed and aggregates.
pub fn evaluate_seeds(
    agent: &mut dyn Agent,
    suites: &[TestSuite],
    backend: &mut dyn Backend,
    seeds: &[u64],
    mode: RewardMode,
) -> Result<EvalReport> {
    let mut rows = Vec::new();
    for &s in seeds {
        rows.extend(evaluate(agent, suites, backend, s, mode));
    }
    EvalReport::new(agent.name(), rows, DEFAULT_REPLICATES, 0)
}
