use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use graph_puzzles::eval::{self, builtin_agent, LocalBackend, TestSuite};
use graph_puzzles::generate::{count_distinct, generate, generate_many};
use graph_puzzles::instance::{parse_corpus, write_corpus};
use graph_puzzles::protocol::{self, Client, RemoteBackend, ServerConfig, ADDR_ENV};
use graph_puzzles::render::render;
use graph_puzzles::solver::{solve, Verdict};
use graph_puzzles::trace::{self, Trace};
use graph_puzzles::{EnvConfig, GridSpec, PuzzleInstance, PuzzleKind, PuzzleState, Result, RewardMode};

#[derive(Parser)]
#[command(name = "gpuzzle", version, about = "Graph puzzle environments: generate, solve, serve, evaluate")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a corpus of unique-solution instances.
    Generate {
        #[command(flatten)]
        puzzle: Puzzle,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output file (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve instances and report the uniqueness verdict.
    Solve {
        #[command(flatten)]
        source: Source,
    },
    /// Count distinct configurations among generated instances.
    CountConfigs {
        #[command(flatten)]
        puzzle: Puzzle,
        #[arg(long, default_value_t = 500_000)]
        samples: usize,
    },
    /// Run the gp/1 environment server.
    Serve {
        /// Socket address (defaults to $GP_ADDR or 127.0.0.1:7878).
        #[arg(long, env = ADDR_ENV)]
        addr: Option<String>,
        /// Speak the protocol on stdin/stdout instead of a socket.
        #[arg(long)]
        stdio: bool,
        /// Corpus addressable with `corpus_index`.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        defaults: Episode,
        #[arg(long, default_value = "net")]
        kind: PuzzleKind,
        #[arg(long, default_value = "4x4")]
        size: GridSpec,
    },
    /// Evaluate a built-in agent on the extrapolation suites.
    Eval {
        /// oracle, noop or random.
        #[arg(long, default_value = "oracle")]
        agent: String,
        /// One kind (all six if absent).
        #[arg(long)]
        kind: Option<PuzzleKind>,
        /// Master seed of the test suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Agent seeds, one run each.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        agent_seeds: Vec<u64>,
        /// Play through a protocol server at this address.
        #[arg(long)]
        connect: Option<String>,
        #[arg(long, default_value = "iterative")]
        reward_mode: RewardMode,
        /// Write the kind,size,seed,solved CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a board with violation markers.
    Render {
        #[command(flatten)]
        source: Source,
        /// Show the stored solution instead of the starting board.
        #[arg(long)]
        solution: bool,
    },
    /// Play one episode with a built-in agent and optionally save the trace.
    Play {
        #[command(flatten)]
        puzzle: Puzzle,
        #[command(flatten)]
        episode: Episode,
        #[arg(long, default_value = "random")]
        agent: String,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Re-run a recorded trace and check every step.
    Replay { trace: PathBuf },
}

#[derive(Args)]
struct Puzzle {
    #[arg(long)]
    kind: PuzzleKind,
    #[arg(long)]
    size: GridSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Episode {
    #[arg(long, default_value = "iterative")]
    reward_mode: RewardMode,
    /// Steps per episode (decision-node count if absent).
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Args)]
struct Source {
    /// Read instances from a corpus file.
    #[arg(long, conflicts_with_all = ["kind", "size", "seed"])]
    input: Option<PathBuf>,
    /// Only this corpus entry.
    #[arg(long, requires = "input")]
    index: Option<usize>,
    #[arg(long, requires = "size")]
    kind: Option<PuzzleKind>,
    #[arg(long, requires = "kind")]
    size: Option<GridSpec>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Source {
    fn instances(&self) -> Result<Vec<PuzzleInstance>> {
        if let Some(path) = &self.input {
            let all = parse_corpus(&fs::read_to_string(path)?)?;
            return match self.index {
                Some(i) => all
                    .get(i)
                    .cloned()
                    .map(|x| vec![x])
                    .ok_or_else(|| graph_puzzles::Error::Contract(format!("corpus has {} entries", all.len()))),
                None => Ok(all),
            };
        }
        match (self.kind, self.size) {
            (Some(k), Some(g)) => Ok(vec![generate(k, g, self.seed)?]),
            _ => Err(graph_puzzles::Error::Contract("give --input or --kind and --size".into())),
        }
    }
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Generate { puzzle, count, out } => {
            let corpus = generate_many(puzzle.kind, puzzle.size, puzzle.seed, count)?;
            emit(out.as_ref(), &write_corpus(&corpus))?;
        }
        Cmd::Solve { source } => {
            for inst in source.instances()? {
                let r = solve(&inst.layout, 2)?;
                let verdict = match r.verdict {
                    Verdict::Unique => "unique",
                    Verdict::Multiple => "multiple",
                    Verdict::None => "none",
                };
                println!("{} {} seed {}: {verdict} ({} nodes)", inst.kind(), inst.grid(), inst.seed, r.nodes);
                if let Some(s) = r.solutions.first() {
                    let state = PuzzleState::new(inst.layout.clone(), s.clone())?;
                    print!("{}", render(&state));
                }
            }
        }
        Cmd::CountConfigs { puzzle, samples } => {
            let n = count_distinct(puzzle.kind, puzzle.size, samples)?;
            println!("{} {}: {n} distinct configurations in {samples} samples", puzzle.kind, puzzle.size);
        }
        Cmd::Serve { addr, stdio, corpus, defaults, kind, size } => {
            let corpus = match corpus {
                Some(p) => Some(Arc::new(parse_corpus(&fs::read_to_string(p)?)?)),
                None => None,
            };
            let defaults = EnvConfig { reward_mode: defaults.reward_mode, horizon: defaults.horizon, ..EnvConfig::new(kind, size) };
            defaults.validate()?;
            let config = Arc::new(ServerConfig { defaults, corpus });
            if stdio {
                protocol::serve_stdio(config)?;
            } else {
                let addr = addr.unwrap_or_else(protocol::default_addr);
                eprintln!("gpuzzle: serving {} on {addr}", protocol::PROTOCOL_VERSION);
                protocol::serve_tcp(config, addr)?;
            }
        }
        Cmd::Eval { agent, kind, seed, agent_seeds, connect, reward_mode, csv } => {
            let mut agent = builtin_agent(&agent)?;
            let kinds = kind.map_or_else(|| PuzzleKind::ALL.to_vec(), |k| vec![k]);
            let suites = kinds
                .into_iter()
                .map(|k| eval::build_suite(k, seed, &HashSet::new()))
                .collect::<Result<Vec<TestSuite>>>()?;
            let report = match connect {
                Some(addr) => {
                    let mut backend = RemoteBackend::new(Client::connect(addr)?);
                    eval::evaluate_seeds(agent.as_mut(), &suites, &mut backend, &agent_seeds, reward_mode)?
                }
                None => eval::evaluate_seeds(agent.as_mut(), &suites, &mut LocalBackend::default(), &agent_seeds, reward_mode)?,
            };
            print!("{}", report.to_text());
            if let Some(p) = csv {
                fs::write(p, report.to_csv())?;
            }
        }
        Cmd::Render { source, solution } => {
            for inst in source.instances()? {
                let state = if solution { PuzzleState::solved_board(&inst) } else { PuzzleState::initial(&inst) };
                println!("{} {} seed {}", inst.kind(), inst.grid(), inst.seed);
                print!("{}", render(&state));
            }
        }
        Cmd::Play { puzzle, episode, agent, trace: out } => {
            let inst = generate(puzzle.kind, puzzle.size, puzzle.seed)?;
            let mut agent = builtin_agent(&agent)?;
            let t = trace::record(&inst, agent.as_mut(), episode.reward_mode, episode.horizon, puzzle.seed)?;
            let mut state = PuzzleState::initial(&inst);
            for s in &t.steps {
                state = state.apply(&s.actions)?;
            }
            print!("{}", render(&state));
            println!("steps {} return {} solved {}", t.steps.len(), t.total_reward(), t.solved());
            if let Some(p) = out {
                fs::write(p, t.to_json())?;
            }
        }
        Cmd::Replay { trace: path } => {
            let t = Trace::from_json(&fs::read_to_string(path)?)?;
            let r = trace::replay(&t)?;
            println!("replayed {} steps: return {} solved {}", r.steps.len(), r.total_reward(), r.solved());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gpuzzle: {e}");
            ExitCode::FAILURE
        }
    }
}
