//! `gp/1`: newline-delimited JSON between an environment server and external
//! trainers.
//!
//! Request: `{"id": any, "cmd": "hello"|"reset"|"step"|"close"|"reset_batch"|"step_batch", "payload": {...}}`.
//! Response: `{"id": <same>, "ok": true, "payload": {...}}` or
//! `{"id": <same>, "ok": false, "error": {"code": "...", "message": "..."}}`.
//!
//! Sessions belong to one connection. `reset` without a `session` opens a
//! new one; with a `session` it starts a new episode there.

use std::collections::BTreeMap;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::sync::Arc;
use std::thread;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::env::{Env, EnvConfig, StepInfo};
use crate::error::{Error, Result};
use crate::eval::{Backend, Observed, Stepped};
use crate::graph::{EdgeDir, GraphObservation, Topology};
use crate::instance::PuzzleInstance;
use crate::puzzle::{GridSpec, PuzzleKind};
use crate::reward::RewardMode;

pub const PROTOCOL_VERSION: &str = "gp/1";

/// Environment variable holding the default socket address.
pub const ADDR_ENV: &str = "GP_ADDR";
pub const DEFAULT_ADDR: &str = "127.0.0.1:7878";

pub fn default_addr() -> String {
    std::env::var(ADDR_ENV).unwrap_or_else(|_| DEFAULT_ADDR.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    #[serde(default)]
    pub id: Value,
    pub cmd: String,
    #[serde(default)]
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub id: Value,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

impl Response {
    fn ok(id: Value, payload: Value) -> Self {
        Response { id, ok: true, payload: Some(payload), error: None }
    }

    fn err(id: Value, code: &str, message: impl Into<String>) -> Self {
        Response {
            id,
            ok: false,
            payload: None,
            error: Some(ErrorBody { code: code.to_string(), message: message.into() }),
        }
    }
}

/// How much of the observation a response carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObsMode {
    /// Topology and features.
    Full,
    /// Features only (the topology never changes within an episode).
    Dynamic,
    None,
}

/// Wire form of a [`GraphObservation`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WireObservation {
    /// Node features, `num_nodes * feature_width`, row-major.
    pub features: Vec<f32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<WireTopology>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WireTopology {
    pub kind: PuzzleKind,
    pub width: usize,
    pub height: usize,
    pub feature_width: usize,
    pub num_nodes: usize,
    pub num_decision: usize,
    /// 1 for meta-nodes.
    pub node_kind: Vec<u8>,
    /// Directed `[source, target]` pairs.
    pub edges: Vec<[u32; 2]>,
    /// Position of the 1 in each edge's direction one-hot.
    pub edge_dirs: Vec<EdgeDir>,
    pub edge_feature_width: usize,
    pub num_actions: usize,
}

impl WireObservation {
    pub fn new(obs: &GraphObservation, mode: ObsMode) -> Option<Self> {
        let topology = (mode == ObsMode::Full).then(|| WireTopology {
            kind: obs.kind,
            width: obs.grid.width,
            height: obs.grid.height,
            feature_width: obs.feature_width,
            num_nodes: obs.node_count(),
            num_decision: obs.topology.decision_nodes,
            node_kind: obs.topology.meta_mask().into_iter().map(u8::from).collect(),
            edges: obs.topology.edges.clone(),
            edge_dirs: obs.topology.edge_dirs.clone(),
            edge_feature_width: EdgeDir::COUNT,
            num_actions: obs.num_actions,
        });
        (mode != ObsMode::None).then(|| WireObservation { features: obs.features.clone(), topology })
    }

    /// Rebuilds a full observation, taking the topology from `previous` when
    /// this one carries features only.
    pub fn into_observation(self, previous: Option<&GraphObservation>) -> Result<GraphObservation> {
        if let Some(t) = self.topology {
            let meta = t.node_kind.iter().filter(|&&k| k != 0).count();
            return Ok(GraphObservation {
                kind: t.kind,
                grid: GridSpec::new(t.width, t.height),
                topology: Topology {
                    decision_nodes: t.num_decision,
                    meta_nodes: meta,
                    edges: t.edges,
                    edge_dirs: t.edge_dirs,
                },
                feature_width: t.feature_width,
                features: self.features,
                num_actions: t.num_actions,
            });
        }
        let prev = previous.ok_or_else(|| Error::contract("features without a known topology"))?;
        Ok(GraphObservation { features: self.features, ..prev.clone() })
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResetPayload {
    session: Option<u64>,
    kind: Option<PuzzleKind>,
    size: Option<String>,
    reward_mode: Option<RewardMode>,
    horizon: Option<usize>,
    normalize_reward: Option<bool>,
    seed: Option<u64>,
    /// A full instance record.
    instance: Option<String>,
    corpus_index: Option<usize>,
    obs_mode: Option<ObsMode>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepPayload {
    session: u64,
    actions: Vec<i64>,
    obs_mode: Option<ObsMode>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClosePayload {
    session: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchPayload<T> {
    items: Vec<T>,
}

/// Settings shared by every connection of a server.
#[derive(Clone, Debug)]
pub struct ServerConfig {
    /// Used when a reset names no kind/size/mode/horizon.
    pub defaults: EnvConfig,
    /// Instances addressable by `corpus_index`.
    pub corpus: Option<Arc<Vec<PuzzleInstance>>>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            defaults: EnvConfig::new(PuzzleKind::Net, GridSpec::square(4)),
            corpus: None,
        }
    }
}

struct Failure {
    code: &'static str,
    message: String,
}

impl Failure {
    fn bad(message: impl Into<String>) -> Self {
        Failure { code: "bad_request", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Generation { .. } => "generation_failed",
            _ => "bad_request",
        };
        Failure { code, message: e.to_string() }
    }
}

/// Per-connection protocol state.
pub struct Connection {
    config: Arc<ServerConfig>,
    sessions: BTreeMap<u64, Env>,
    next_session: u64,
}

impl Connection {
    pub fn new(config: Arc<ServerConfig>) -> Self {
        Connection { config, sessions: BTreeMap::new(), next_session: 1 }
    }

    /// Answers one request line. Never panics on bad input.
    pub fn handle_line(&mut self, line: &str) -> String {
        let resp = match serde_json::from_str::<Value>(line) {
            Err(e) => Response::err(Value::Null, "bad_request", format!("invalid JSON: {e}")),
            Ok(v) => {
                let id = v.get("id").cloned().unwrap_or(Value::Null);
                match serde_json::from_value::<Request>(v) {
                    Err(e) => Response::err(id, "bad_request", format!("malformed request: {e}")),
                    Ok(req) => self.handle(req),
                }
            }
        };
        serde_json::to_string(&resp).expect("responses serialize")
    }

    pub fn handle(&mut self, req: Request) -> Response {
        let id = req.id.clone();
        let result = match req.cmd.as_str() {
            "hello" => self.hello(req.payload),
            "reset" => parse(req.payload).and_then(|p| self.reset(p)),
            "step" => parse(req.payload).and_then(|p| self.step(p)),
            "close" => parse(req.payload).and_then(|p: ClosePayload| self.close(p.session)),
            "reset_batch" => parse(req.payload).and_then(|b: BatchPayload<ResetPayload>| {
                let items = b.items.into_iter().map(|p| self.reset(p)).collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(json!({ "items": items }))
            }),
            "step_batch" => parse(req.payload).and_then(|b: BatchPayload<StepPayload>| {
                let items = b.items.into_iter().map(|p| self.step(p)).collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(json!({ "items": items }))
            }),
            other => Err(Failure { code: "unknown_cmd", message: format!("unknown command {other:?}") }),
        };
        match result {
            Ok(payload) => Response::ok(id, payload),
            Err(f) => Response::err(id, f.code, f.message),
        }
    }

    fn hello(&self, payload: Value) -> std::result::Result<Value, Failure> {
        if let Some(v) = payload.get("version").and_then(Value::as_str) {
            if v != PROTOCOL_VERSION {
                return Err(Failure {
                    code: "unsupported_version",
                    message: format!("server speaks {PROTOCOL_VERSION}, client asked for {v}"),
                });
            }
        }
        Ok(json!({
            "protocol_version": PROTOCOL_VERSION,
            "kinds": PuzzleKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>(),
            "reward_modes": RewardMode::ALL.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "obs_modes": ["full", "dynamic", "none"],
            "corpus_size": self.config.corpus.as_ref().map_or(0, |c| c.len()),
        }))
    }

    fn reset(&mut self, p: ResetPayload) -> std::result::Result<Value, Failure> {
        let sources = usize::from(p.seed.is_some()) + usize::from(p.instance.is_some()) + usize::from(p.corpus_index.is_some());
        if sources != 1 {
            return Err(Failure::bad("reset needs exactly one of seed, instance, corpus_index"));
        }
        let fixed = if let Some(text) = &p.instance {
            Some(PuzzleInstance::parse(text).map_err(|e| Failure::bad(e.to_string()))?)
        } else if let Some(i) = p.corpus_index {
            let corpus = self.config.corpus.as_ref().ok_or_else(|| Failure::bad("server has no corpus"))?;
            Some(corpus.get(i).cloned().ok_or_else(|| {
                Failure::bad(format!("corpus has {} entries, asked for {i}", corpus.len()))
            })?)
        } else {
            None
        };
        let d = &self.config.defaults;
        let (kind, grid) = match &fixed {
            Some(inst) => (inst.kind(), inst.grid()),
            None => {
                let grid = match &p.size {
                    Some(s) => s.parse::<GridSpec>()?,
                    None if p.kind.is_none() || p.kind == Some(d.kind) => d.grid,
                    None => return Err(Failure::bad("reset with a kind also needs a size")),
                };
                (p.kind.unwrap_or(d.kind), grid)
            }
        };
        if let Some(inst) = &fixed {
            let named = p.size.as_deref().map(str::parse::<GridSpec>).transpose()?;
            if p.kind.is_some_and(|k| k != kind) || named.is_some_and(|g| g != grid) {
                return Err(Failure::bad(format!("instance is {} {}", inst.kind(), inst.grid())));
            }
        }
        let config = EnvConfig {
            kind,
            grid,
            reward_mode: p.reward_mode.unwrap_or(d.reward_mode),
            horizon: p.horizon.or(d.horizon),
            seed: d.seed,
            normalize_reward: p.normalize_reward.unwrap_or(d.normalize_reward),
        };
        let mut env = Env::new(config)?;
        let obs = match fixed {
            Some(inst) => env.reset_with(inst)?,
            None => env.reset(p.seed.expect("checked above"))?,
        };
        let session = match p.session {
            Some(s) if self.sessions.contains_key(&s) => s,
            Some(s) => return Err(Failure { code: "unknown_session", message: format!("no session {s}") }),
            None => {
                self.next_session += 1;
                self.next_session - 1
            }
        };
        let values = env.state().expect("episode started").values().to_vec();
        let tracker = env.tracker().expect("episode started");
        let reply = json!({
            "session": session,
            "kind": kind,
            "size": grid.to_string(),
            "horizon": env.config().effective_horizon(),
            "num_decision": values.len(),
            "quality": tracker.quality(),
            "masked_quality": tracker.masked_quality(),
            "values": values,
            "observation": WireObservation::new(&obs, p.obs_mode.unwrap_or(ObsMode::Full)),
        });
        self.sessions.insert(session, env);
        Ok(reply)
    }

    fn step(&mut self, p: StepPayload) -> std::result::Result<Value, Failure> {
        let env = self
            .sessions
            .get_mut(&p.session)
            .ok_or_else(|| Failure { code: "unknown_session", message: format!("no session {}", p.session) })?;
        let actions = p
            .actions
            .iter()
            .map(|&a| u8::try_from(a).map_err(|_| Failure::bad(format!("action {a} out of range"))))
            .collect::<std::result::Result<Vec<u8>, _>>()?;
        let out = env.step(&actions)?;
        let values = env.state().expect("episode started").values();
        Ok(json!({
            "session": p.session,
            "reward": out.reward,
            "done": out.done,
            "info": out.info,
            "values": values,
            "observation": WireObservation::new(&out.observation, p.obs_mode.unwrap_or(ObsMode::Dynamic)),
        }))
    }

    fn close(&mut self, session: u64) -> std::result::Result<Value, Failure> {
        self.sessions
            .remove(&session)
            .map(|_| json!({ "session": session, "closed": true }))
            .ok_or_else(|| Failure { code: "unknown_session", message: format!("no session {session}") })
    }
}

fn parse<T: for<'de> Deserialize<'de>>(payload: Value) -> std::result::Result<T, Failure> {
    let payload = if payload.is_null() { json!({}) } else { payload };
    serde_json::from_value(payload).map_err(|e| Failure::bad(format!("bad payload: {e}")))
}

/// Serves one connection until end of input.
pub fn serve_stream(config: Arc<ServerConfig>, input: impl BufRead, output: impl Write) -> io::Result<()> {
    let mut conn = Connection::new(config);
    let mut out = BufWriter::new(output);
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let resp = conn.handle_line(&line);
        out.write_all(resp.as_bytes())?;
        out.write_all(b"\n")?;
        out.flush()?;
    }
    Ok(())
}

pub fn serve_stdio(config: Arc<ServerConfig>) -> io::Result<()> {
    let stdin = io::stdin();
    serve_stream(config, stdin.lock(), io::stdout().lock())
}

/// Accepts connections forever, one thread each.
pub fn serve_listener(config: Arc<ServerConfig>, listener: TcpListener) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        // replies are small and strictly request/response
        stream.set_nodelay(true)?;
        let config = config.clone();
        thread::spawn(move || {
            let reader = match stream.try_clone() {
                Ok(s) => BufReader::new(s),
                Err(_) => return,
            };
            let _ = serve_stream(config, reader, stream);
        });
    }
    Ok(())
}

pub fn serve_tcp(config: Arc<ServerConfig>, addr: impl ToSocketAddrs) -> io::Result<()> {
    serve_listener(config, TcpListener::bind(addr)?)
}

/// Reply to `reset`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ResetReply {
    pub session: u64,
    pub kind: PuzzleKind,
    pub size: String,
    pub horizon: usize,
    pub num_decision: usize,
    pub quality: usize,
    pub masked_quality: usize,
    pub values: Vec<u8>,
    pub observation: Option<WireObservation>,
}

/// Reply to `step`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct StepReply {
    pub session: u64,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
    pub values: Vec<u8>,
    pub observation: Option<WireObservation>,
}

/// Blocking client over any line-oriented byte stream.
pub struct Client<R, W> {
    reader: R,
    writer: W,
    next_id: u64,
}

impl Client<BufReader<TcpStream>, TcpStream> {
    pub fn connect(addr: impl ToSocketAddrs) -> Result<Self> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(Client::new(BufReader::new(stream.try_clone()?), stream))
    }
}

impl<R: BufRead, W: Write> Client<R, W> {
    pub fn new(reader: R, writer: W) -> Self {
        Client { reader, writer, next_id: 1 }
    }

    /// Sends one request and returns the payload of a successful reply.
    pub fn request(&mut self, cmd: &str, payload: Value) -> Result<Value> {
        let id = self.next_id;
        self.next_id += 1;
        let req = Request { id: json!(id), cmd: cmd.to_string(), payload };
        let mut line = serde_json::to_string(&req)?;
        line.push('\n');
        self.writer.write_all(line.as_bytes())?;
        self.writer.flush()?;
        let mut buf = String::new();
        if self.reader.read_line(&mut buf)? == 0 {
            return Err(Error::Io(io::Error::new(io::ErrorKind::UnexpectedEof, "server closed the connection")));
        }
        let resp: Response = serde_json::from_str(&buf)?;
        if resp.id != json!(id) {
            return Err(Error::Protocol { code: "id_mismatch".into(), message: format!("sent {id}, got {}", resp.id) });
        }
        match (resp.ok, resp.payload, resp.error) {
            (true, Some(p), _) => Ok(p),
            (_, _, Some(e)) => Err(Error::Protocol { code: e.code, message: e.message }),
            _ => Err(Error::Protocol { code: "bad_response".into(), message: buf }),
        }
    }

    pub fn hello(&mut self) -> Result<Value> {
        self.request("hello", json!({ "version": PROTOCOL_VERSION }))
    }

    pub fn reset(&mut self, payload: Value) -> Result<ResetReply> {
        Ok(serde_json::from_value(self.request("reset", payload)?)?)
    }

    pub fn step(&mut self, session: u64, actions: &[u8], obs_mode: ObsMode) -> Result<StepReply> {
        let payload = json!({ "session": session, "actions": actions, "obs_mode": obs_mode });
        Ok(serde_json::from_value(self.request("step", payload)?)?)
    }

    pub fn close(&mut self, session: u64) -> Result<()> {
        self.request("close", json!({ "session": session })).map(|_| ())
    }
}

/// Plays evaluation episodes through a protocol server, resetting each
/// episode with the full instance record.
pub struct RemoteBackend<R, W> {
    client: Client<R, W>,
    session: Option<u64>,
    last: Option<GraphObservation>,
}

impl<R: BufRead, W: Write> RemoteBackend<R, W> {
    pub fn new(client: Client<R, W>) -> Self {
        RemoteBackend { client, session: None, last: None }
    }

    pub fn into_client(self) -> Client<R, W> {
        self.client
    }
}

impl<R: BufRead, W: Write> Backend for RemoteBackend<R, W> {
    fn reset(&mut self, instance: &PuzzleInstance, mode: RewardMode, horizon: Option<usize>) -> Result<Observed> {
        let mut payload = json!({
            "instance": instance.to_record(),
            "reward_mode": mode,
            "obs_mode": ObsMode::Full,
        });
        if let Some(h) = horizon {
            payload["horizon"] = json!(h);
        }
        if let Some(s) = self.session {
            payload["session"] = json!(s);
        }
        let r = self.client.reset(payload)?;
        self.session = Some(r.session);
        let wire = r.observation.ok_or_else(|| Error::contract("reset reply without observation"))?;
        let observation = wire.into_observation(None)?;
        self.last = Some(observation.clone());
        Ok(Observed { observation, values: r.values })
    }

    fn step(&mut self, actions: &[u8], observe: bool) -> Result<Stepped> {
        let session = self.session.ok_or_else(|| Error::contract("step before reset"))?;
        let mode = if observe { ObsMode::Dynamic } else { ObsMode::None };
        let r = self.client.step(session, actions, mode)?;
        let last = self.last.as_ref().ok_or_else(|| Error::contract("step before reset"))?;
        let observation = match r.observation {
            Some(wire) => wire.into_observation(Some(last))?,
            None if !observe => last.clone(),
            None => return Err(Error::contract("step reply without observation")),
        };
        if observe {
            self.last = Some(observation.clone());
        }
        Ok(Stepped {
            observed: Observed { observation, values: r.values },
            reward: r.reward,
            done: r.done,
            solved: r.info.solved,
        })
    }
}
