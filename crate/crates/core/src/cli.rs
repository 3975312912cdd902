//! The `ftoracle` command line: build, query, verify, bench.
//!
//! Exit codes: 0 success, 1 not found (or threshold breach for `verify` and
//! `bench`), 2 invalid arguments, 3 unreadable or malformed input, 4 cap
//! exceeded.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::bench::bench_trees_vs_baseline;
use crate::dso::{build_bounded_diameter_dso, build_dso_with_params, HopDso, DEFAULT_MAX_BYTES};
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::graph::{parse_edge_list, FailureSet, Graph};
use crate::motif::{build_motif_oracle_with_params, compute_motif_params, MotifKind, MotifOracle, MotifSpec, DEFAULT_MAX_FINDER_CALLS, MOTIF_MAGIC};
use crate::rpc::{build_family, compute_params, FailureMode, RpcFamily, DEFAULT_C, DEFAULT_MAX_SUBNETWORKS, RPC_MAGIC};
use crate::verify::{run_coverage_trial_on, BuilderConfig, OracleKind, TrialConfig, TrialReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_CAP: i32 = 4;

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::SelfLoop { .. } | Error::BadWeight { .. } | Error::Format(_) | Error::Io(_) => EXIT_PARSE,
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::InvalidId { .. }
        | Error::RemovedEndpoint(_)
        | Error::InvalidParams(_)
        | Error::TooManyFailures { .. }
        | Error::FailureKind(_)
        | Error::Disconnected => EXIT_INVALID,
    }
}

#[derive(Debug, Parser)]
#[command(name = "ftoracle", version, about = "Fault-tolerant distance and motif oracles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an oracle from an edge-list file and write it to --out.
    Build(BuildArgs),
    /// Answer one failure query against a stored oracle.
    Query(QueryArgs),
    /// Run a seeded trial against brute force.
    Verify(VerifyArgs),
    /// Compare tree queries with the flat baseline scan.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuildKind {
    Rpc,
    Dso,
    /// Bounded-diameter distance oracle, L = (f + 1) D.
    Bdso,
    Motif,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MotifArg {
    Path,
    Clique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Maximum number of simultaneous failures.
    #[arg(long, default_value_t = 1)]
    pub f: usize,
    /// Hop cutoff.
    #[arg(long = "L")]
    pub max_hops: Option<usize>,
    /// Motif size.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub motif: Option<MotifArg>,
    #[arg(long, default_value_t = DEFAULT_C)]
    pub c: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Ignore --seed and draw a fresh one (reported in the output).
    #[arg(long)]
    pub random_seed: bool,
    #[arg(long)]
    pub directed: bool,
    #[arg(long)]
    pub node_failures: bool,
}

impl Params {
    fn seed(&self) -> u64 {
        if self.random_seed {
            rand::random()
        } else {
            self.seed
        }
    }

    fn mode(&self) -> FailureMode {
        if self.node_failures {
            FailureMode::Nodes
        } else {
            FailureMode::Edges
        }
    }

    fn hops(&self) -> Result<usize> {
        self.max_hops.ok_or_else(|| Error::InvalidParams("--L is required".into()))
    }

    fn motif_spec(&self) -> Result<MotifSpec> {
        let k = self.k.ok_or_else(|| Error::InvalidParams("--k is required for motif oracles".into()))?;
        match self.motif.unwrap_or(MotifArg::Path) {
            MotifArg::Path => MotifSpec::new(MotifKind::Path, k),
            MotifArg::Clique => MotifSpec::new(MotifKind::Clique, k),
        }
    }

    fn edges_only(&self, what: &str) -> Result<()> {
        if self.node_failures {
            return Err(Error::InvalidParams(format!("{what} supports edge failures only")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub kind: BuildKind,
    #[command(flatten)]
    pub params: Params,
    /// Cap on distance-table bytes.
    #[arg(long, default_value_t = DEFAULT_MAX_BYTES as u64)]
    pub max_bytes: u64,
    /// Cap on motif finder calls.
    #[arg(long, default_value_t = DEFAULT_MAX_FINDER_CALLS as u64)]
    pub max_finder_calls: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Edge-list file.
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct QueryArgs {
    /// Stored oracle file.
    #[arg(long)]
    pub oracle: PathBuf,
    /// Graph the oracle was built on; needed for `e:u-v` failures and rpc
    /// coverage checks.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    /// Failure: `e:u-v`, `eid:N` or `v:x`. Repeatable.
    #[arg(long = "fail")]
    pub fail: Vec<String>,
    /// JSON array of failure specs.
    #[arg(long)]
    pub fail_file: Option<PathBuf>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// JSON file with `{"builder": ..., "trial": ...}`; overrides the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BuildKind::Dso)]
    pub kind: BuildKind,
    /// Generator such as `gnp:30:0.15:5`; used unless a graph file is given.
    #[arg(long, default_value = "gnp:30:0.15:5")]
    pub generator: String,
    #[command(flatten)]
    pub params: Params,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub trial_seed: u64,
    #[arg(long, default_value_t = 0.99)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Edge-list file instead of a generator.
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "gnm:30:90")]
    pub generator: String,
    #[command(flatten)]
    pub params: Params,
    #[arg(long, default_value_t = 100)]
    pub queries: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_SUBNETWORKS as u64)]
    pub max_subnetworks: u64,
    #[arg(long, value_enum, default_value_t = BenchFormat::Json)]
    pub format: BenchFormat,
    /// Edge-list file instead of a generator.
    pub graph: Option<PathBuf>,
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INVALID;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Build(a) => cmd_build(&a, out),
        Command::Query(a) => cmd_query(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn read_graph(path: &Path, directed: bool) -> Result<Graph> {
    let file = File::open(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_edge_list(BufReader::new(file), directed)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json values serialize"))?;
    Ok(())
}

fn cmd_build(a: &BuildArgs, out: &mut dyn Write) -> Result<i32> {
    let p = &a.params;
    let seed = p.seed();
    // validate parameters before reading or building anything
    if matches!(a.kind, BuildKind::Bdso | BuildKind::Motif) {
        p.edges_only(if a.kind == BuildKind::Bdso { "the bounded-diameter oracle" } else { "the motif oracle" })?;
    }
    if matches!(a.kind, BuildKind::Rpc | BuildKind::Dso) {
        compute_params(p.f, p.hops()?, 2, p.c, p.mode())?;
    }
    if a.kind == BuildKind::Motif {
        compute_motif_params(p.motif_spec()?, p.f, 2, p.c)?;
    }
    let g = read_graph(&a.graph, p.directed)?;
    let start = Instant::now();
    let (bytes, mut sidecar) = match a.kind {
        BuildKind::Rpc => {
            let params = compute_params(p.f, p.hops()?, g.node_count(), p.c, p.mode())?;
            let family = build_family(&g, &params, seed)?;
            (family.to_bytes(), family.sidecar())
        }
        BuildKind::Dso => {
            let params = compute_params(p.f, p.hops()?, g.node_count(), p.c, p.mode())?;
            let dso = build_dso_with_params(&g, &params, seed, a.max_bytes as u128)?;
            let mut s = dso.sidecar();
            s["warnings"] = json!(dso.stats().warnings);
            (dso.to_bytes(), s)
        }
        BuildKind::Bdso => {
            let dso = build_bounded_diameter_dso(&g, p.f, p.c, seed, a.max_bytes as u128)?;
            let mut s = dso.sidecar();
            s["diameter"] = json!(dso.stats().diameter);
            s["warnings"] = json!(dso.stats().warnings);
            (dso.to_bytes(), s)
        }
        BuildKind::Motif => {
            let params = compute_motif_params(p.motif_spec()?, p.f, g.node_count(), p.c)?;
            let oracle = build_motif_oracle_with_params(&g, &params, seed, a.max_finder_calls as u128)?;
            (oracle.to_bytes(), oracle.sidecar())
        }
    };
    let build_ms = start.elapsed().as_millis() as u64;
    write_atomic(&a.out, &bytes)?;
    sidecar["file_bytes"] = json!(bytes.len());
    sidecar["build_ms"] = json!(build_ms);
    write_atomic(&sidecar_path(&a.out), serde_json::to_string_pretty(&sidecar).expect("json").as_bytes())?;
    let params = &sidecar["params"];
    let stats = json!({
        "kind": format!("{:?}", a.kind).to_lowercase(),
        "out": a.out.display().to_string(),
        "seed": seed,
        "K": params["K"],
        "alpha": params["alpha"],
        "h": params["h"],
        "p": params["p"],
        "leaves": sidecar["counts"]["leaves_per_tree"].as_u64().unwrap_or(0) * sidecar["counts"]["trees"].as_u64().unwrap_or(0),
        "bytes": bytes.len(),
        "build_ms": build_ms,
        "sidecar": sidecar,
    });
    print_json(out, &stats)?;
    Ok(EXIT_OK)
}

/// A stored oracle of any kind.
#[derive(Debug)]
pub enum LoadedOracle {
    Rpc(RpcFamily),
    Dso(Box<HopDso>),
    Motif(Box<MotifOracle>),
}

impl LoadedOracle {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.starts_with(MOTIF_MAGIC) {
            return Ok(LoadedOracle::Motif(Box::new(MotifOracle::from_bytes(bytes)?)));
        }
        if !bytes.starts_with(RPC_MAGIC) {
            return Err(Error::Format("not an oracle container".into()));
        }
        match RpcFamily::from_bytes(bytes) {
            Ok(family) => Ok(LoadedOracle::Rpc(family)),
            Err(first) => HopDso::from_bytes(bytes).map(|d| LoadedOracle::Dso(Box::new(d))).map_err(|_| first),
        }
    }

    fn graph_digest(&self) -> u64 {
        match self {
            LoadedOracle::Rpc(f) => f.graph_digest(),
            LoadedOracle::Dso(d) => d.family().graph_digest(),
            LoadedOracle::Motif(m) => m.graph_digest(),
        }
    }
}

/// Parses one failure spec: `e:u-v`, `eid:N` or `v:x`.
pub fn parse_failure(spec: &str, g: Option<&Graph>, into: &mut (Vec<usize>, Vec<usize>)) -> Result<()> {
    let bad = || Error::InvalidParams(format!("bad failure spec {spec:?} (expected e:u-v, eid:N or v:x)"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "v" => into.1.push(num(rest)?),
        "eid" => into.0.push(num(rest)?),
        "e" => {
            let (u, v) = rest.split_once('-').ok_or_else(bad)?;
            let (u, v) = (num(u)?, num(v)?);
            let g = g.ok_or_else(|| Error::InvalidParams(format!("{spec:?} needs --graph to resolve the edge")))?;
            match g.find_edges(u, v).as_slice() {
                [e] => into.0.push(*e),
                [] => return Err(Error::InvalidParams(format!("no edge {u}-{v}"))),
                _ => return Err(Error::InvalidParams(format!("edge {u}-{v} is ambiguous (parallel edges); use eid:N"))),
            }
        }
        _ => return Err(bad()),
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FailFile {
    Specs(Vec<String>),
    Ids { #[serde(default)] edges: Vec<usize>, #[serde(default)] nodes: Vec<usize> },
}

fn collect_failures(a: &QueryArgs, g: Option<&Graph>) -> Result<FailureSet> {
    let mut acc = (Vec::new(), Vec::new());
    for spec in &a.fail {
        parse_failure(spec, g, &mut acc)?;
    }
    if let Some(path) = &a.fail_file {
        let text = std::fs::read_to_string(path)?;
        let parsed: FailFile = serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        match parsed {
            FailFile::Specs(specs) => {
                for spec in &specs {
                    parse_failure(spec, g, &mut acc)?;
                }
            }
            FailFile::Ids { edges, nodes } => {
                acc.0.extend(edges);
                acc.1.extend(nodes);
            }
        }
    }
    if !acc.0.is_empty() && !acc.1.is_empty() {
        return Err(Error::FailureKind("mixed edge and node failures are not supported".into()));
    }
    Ok(FailureSet::new(acc.0, acc.1))
}

fn cmd_query(a: &QueryArgs, out: &mut dyn Write) -> Result<i32> {
    let bytes = std::fs::read(&a.oracle)?;
    let oracle = LoadedOracle::from_bytes(&bytes)?;
    let g = a.graph.as_deref().map(|p| read_graph(p, a.directed)).transpose()?;
    if let Some(g) = &g {
        if g.digest() != oracle.graph_digest() {
            return Err(Error::InvalidParams("--graph is not the graph this oracle was built on".into()));
        }
    }
    let failures = collect_failures(a, g.as_ref())?;
    let pair = || -> Result<(usize, usize)> {
        match (a.s, a.t) {
            (Some(s), Some(t)) => Ok((s, t)),
            _ => Err(Error::InvalidParams("--s and --t are required".into())),
        }
    };
    match &oracle {
        LoadedOracle::Rpc(family) => {
            let result = family.query(&failures)?;
            let mut answer = json!({
                "kind": "rpc",
                "failures": failures,
                "leaves": result.leaves,
                "nodes_touched": result.nodes_touched,
                "trees_abandoned": result.trees_abandoned,
            });
            if let (Some(g), Some(s), Some(t)) = (&g, a.s, a.t) {
                answer["coverage"] = json!(family.covers(g, &failures, s, t)?);
            }
            print_json(out, &answer)?;
            Ok(if result.leaves.is_empty() { EXIT_NOT_FOUND } else { EXIT_OK })
        }
        LoadedOracle::Dso(dso) => {
            let (s, t) = pair()?;
            let answer = dso.query(s, t, &failures)?;
            let finite = answer.distance.is_finite();
            print_json(
                out,
                &json!({
                    "kind": "dso",
                    "s": s,
                    "t": t,
                    "failures": failures,
                    "distance": if finite { json!(answer.distance.value) } else { json!(null) },
                    "hops": answer.distance.hops,
                    "witness_leaf": answer.witness_leaf,
                    "leaves_scanned": answer.leaves_scanned,
                    "nodes_touched": answer.nodes_touched,
                    "covering_empty": answer.covering_empty,
                }),
            )?;
            Ok(if finite { EXIT_OK } else { EXIT_NOT_FOUND })
        }
        LoadedOracle::Motif(m) => {
            let answer = m.query(&failures)?;
            print_json(out, &serde_json::to_value(&answer).expect("json"))?;
            Ok(if answer.found { EXIT_OK } else { EXIT_NOT_FOUND })
        }
    }
}

#[derive(Deserialize)]
struct VerifyFile {
    builder: BuilderConfig,
    trial: TrialConfig,
}

fn oracle_kind(kind: BuildKind) -> OracleKind {
    match kind {
        BuildKind::Rpc => OracleKind::Rpc,
        BuildKind::Dso => OracleKind::Dso,
        BuildKind::Bdso => OracleKind::BoundedDso,
        BuildKind::Motif => OracleKind::Motif,
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (builder, trial) = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let file: VerifyFile = serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            (file.builder, file.trial)
        }
        None => {
            let p = &a.params;
            let mut b = BuilderConfig::new(oracle_kind(a.kind), a.generator.parse::<GeneratorSpec>()?, p.f);
            b.max_hops = p.max_hops;
            b.motif = if a.kind == BuildKind::Motif { Some(p.motif_spec()?) } else { None };
            b.c = p.c;
            b.seed = p.seed();
            b.mode = p.mode();
            (b, TrialConfig { trials: a.trials, seed: a.trial_seed, tolerance: a.tolerance })
        }
    };
    let g = match &a.graph {
        Some(path) => read_graph(path, a.params.directed)?,
        None => builder.graph.generate(builder.seed),
    };
    let report = run_coverage_trial_on(&g, &builder, &trial)?;
    match a.format {
        ReportFormat::Json => print_json(out, &serde_json::to_value(&report).expect("json"))?,
        ReportFormat::Table => write_table(out, &report)?,
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_NOT_FOUND })
}

fn write_table(out: &mut dyn Write, r: &TrialReport) -> Result<()> {
    writeln!(out, "trials          {}", r.trials)?;
    writeln!(out, "successes       {}", r.successes)?;
    writeln!(out, "success rate    {:.4} (need {:.4})", r.success_rate(), r.tolerance)?;
    writeln!(out, "not applicable  {}", r.not_applicable)?;
    writeln!(out, "hard violations {}", r.hard_violations)?;
    writeln!(out, "nodes touched   {} (bound {})", r.max_nodes_touched, r.work_bound)?;
    writeln!(out, "wall time ms    {}", r.wall_time_ms)?;
    writeln!(out, "result          {}", if r.passed() { "pass" } else { "FAIL" })?;
    Ok(())
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let p = &a.params;
    p.edges_only("bench")?;
    let seed = p.seed();
    let g = match &a.graph {
        Some(path) => read_graph(path, p.directed)?,
        None => a.generator.parse::<GeneratorSpec>()?.generate(seed),
    };
    let report = bench_trees_vs_baseline(&g, p.f, p.hops()?, p.c, seed, a.queries, a.max_subnetworks as u128)?;
    match a.format {
        BenchFormat::Json => print_json(out, &serde_json::to_value(&report).expect("json"))?,
        BenchFormat::Csv => write!(out, "{}", report.to_csv()?)?,
    }
    Ok(if report.counters_hold() { EXIT_OK } else { EXIT_NOT_FOUND })
}
