//! The `windmill` command line: argument parsing and command dispatch.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use windmill_core::counter::{count_b_edge_cover, count_b_matching, CountParams, Problem, RATIO_CHECK_LIMIT};
use windmill_core::holant::{brute_strata, brute_z, HolantInstance};
use windmill_core::mcmc::{default_burn_in, omega0_lower_bound, start_state, transition_matrix, Chain};
use windmill_core::rational::{int, parse_rational, to_f64, to_fraction_string, Rational};
use windmill_core::symfunc::{make_named, SymmetricFunction};
use windmill_core::windability::{build_a, is_windable};

use crate::fixtures;
use crate::format::{self, DiagnosticsJson, EstimateJson, FormatError, FunctionSpec, GraphSpec, ReportJson, TrajectoryRecord};
use crate::suites;

/// Exit status for success or a positive verdict.
pub const EXIT_OK: i32 = 0;
/// Exit status for a negative verdict or a failed check.
pub const EXIT_NEGATIVE: i32 = 1;
/// Exit status for usage and runtime errors.
pub const EXIT_ERROR: i32 = 2;

/// Subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print the partition matrix A_m.
    Matrix,
    /// Decide windability of one symmetric function.
    Windcheck,
    /// Exact Z_k by enumeration.
    Oracle,
    /// Run the chain and print a trajectory.
    Sample,
    /// Approximate Z_0 for a b-matching or b-edge-cover problem.
    Count,
    /// Run named invariant suites.
    Verify,
}

/// Batch front end for windability checks, exact oracles, sampling and
/// approximate counting.
#[derive(Debug, Clone, Parser)]
#[command(name = "windmill", version)]
pub struct Cli {
    /// Command to run.
    #[arg(value_enum)]
    pub command: Command,
    /// Suite for `verify`: rowsums, com, pdecom, detailed-balance, strata,
    /// all or diagnostics.
    pub suite: Option<String>,
    /// Graph or function JSON file, or `fixture:NAME` for a bundled graph.
    #[arg(long)]
    pub input: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative error target (also the TV target for the default burn-in).
    #[arg(long, default_value = "1/10")]
    pub epsilon: String,
    /// Failure probability.
    #[arg(long, default_value = "1/20")]
    pub delta: String,
    /// Chain steps before the first retained sample.
    #[arg(long)]
    pub burn_in: Option<u64>,
    /// Samples per telescoping factor (`count`) or records (`sample`).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Steps between retained samples.
    #[arg(long, default_value_t = 1)]
    pub thinning: u64,
    /// Matrix order, or the range limit for `verify`.
    #[arg(long)]
    pub m: Option<usize>,
    /// Function family (windcheck) or problem (matching, edge-cover).
    #[arg(long)]
    pub kind: Option<String>,
    /// Family parameter(s) for windcheck; Z_k indices for oracle.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    /// Problem parameter b.
    #[arg(long)]
    pub b: Option<usize>,
    /// Function arity.
    #[arg(long)]
    pub arity: Option<usize>,
    /// Function values by Hamming weight, comma separated.
    #[arg(long)]
    pub values: Option<String>,
    /// Edge weights, comma separated; the edge gadget weight for windcheck.
    #[arg(long)]
    pub weights: Option<String>,
}

/// Failure of a command.
#[derive(Debug, Error)]
pub enum CliError {
    /// Missing or contradictory flags.
    #[error("usage: {0}")]
    Usage(String),
    /// Input could not be read or parsed.
    #[error(transparent)]
    Format(#[from] FormatError),
    /// Rejected by the core library.
    #[error(transparent)]
    Core(#[from] windmill_core::Error),
    /// File system error.
    #[error("{0}")]
    Io(String),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Format(e.into())
    }
}

/// Text to print and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// Output, newline terminated.
    pub text: String,
    /// Exit status.
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }

    fn verdict(text: String, positive: bool) -> Self {
        Self { text, code: if positive { EXIT_OK } else { EXIT_NEGATIVE } }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string(value)? + "\n")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn rational_flag(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| usage(format!("--{name}: {e}")))
}

/// Parses a problem name.
pub fn parse_problem(kind: &str, b: usize) -> Result<Problem, CliError> {
    match kind.to_ascii_lowercase().as_str() {
        "matching" | "b-matching" | "atmost" => Ok(Problem::BMatching(b)),
        "edge-cover" | "edgecover" | "b-edge-cover" | "cover" | "atleast" => Ok(Problem::BEdgeCover(b)),
        other => Err(usage(format!("unknown problem kind {other:?}; use matching or edge-cover"))),
    }
}

/// A graph with the problem and weights the flags (or a bundled fixture)
/// attach to it.
#[derive(Debug, Clone)]
struct GraphInput {
    graph: GraphSpec,
    problem: Option<Problem>,
    weights: Option<Vec<Rational>>,
}

impl GraphInput {
    fn instance(&self) -> Result<HolantInstance, CliError> {
        Ok(self.graph.instance(self.problem, self.weights.as_deref())?)
    }

    fn effective_weights(&self) -> Result<Option<Vec<Rational>>, CliError> {
        Ok(match &self.weights {
            Some(w) => Some(w.clone()),
            None => self.graph.weights()?,
        })
    }
}

fn read_input(cli: &Cli) -> Result<String, CliError> {
    let path = cli.input.as_ref().ok_or_else(|| usage("--input is required"))?;
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))
}

fn graph_input(cli: &Cli) -> Result<GraphInput, CliError> {
    let weights = cli.weights.as_deref().map(format::parse_list).transpose()?;
    let problem = match (&cli.kind, cli.b) {
        (Some(kind), Some(b)) => Some(parse_problem(kind, b)?),
        (Some(_), None) => return Err(usage("--kind needs --b")),
        (None, Some(_)) => return Err(usage("--b needs --kind")),
        (None, None) => None,
    };
    if let Some(name) = cli.input.as_deref().and_then(|s| s.strip_prefix("fixture:")) {
        let f = fixtures::by_name(name).ok_or_else(|| usage(format!("unknown fixture {name:?}")))?;
        return Ok(GraphInput {
            graph: GraphSpec::from_edges(f.num_vertices, &f.edges),
            problem: problem.or(Some(f.problem)),
            weights: weights.or(f.weights),
        });
    }
    let graph = GraphSpec::from_json(&read_input(cli)?)?;
    Ok(GraphInput { graph, problem, weights })
}

fn cmd_matrix(cli: &Cli) -> Result<Outcome, CliError> {
    let m = cli.m.ok_or_else(|| usage("matrix needs --m"))?;
    if m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    Ok(Outcome::ok(json(&format::matrix_json(&build_a(m)?))?))
}

fn windcheck_function(cli: &Cli) -> Result<SymmetricFunction, CliError> {
    if let Some(values) = &cli.values {
        let f = SymmetricFunction::new(format::parse_list(values)?)?;
        if cli.arity.is_some_and(|d| d != f.arity()) {
            return Err(usage(format!("--values has arity {}, --arity says otherwise", f.arity())));
        }
        return Ok(f);
    }
    if let Some(kind) = &cli.kind {
        let named = format::named_kind(kind, cli.k.first().copied(), cli.k.get(1).copied(), cli.weights.as_deref())?;
        let arity = cli.arity.ok_or_else(|| usage("--kind needs --arity"))?;
        return Ok(make_named(&named, arity)?);
    }
    if cli.input.is_some() {
        let spec: FunctionSpec = serde_json::from_str(&read_input(cli)?)?;
        return Ok(spec.resolve(None)?);
    }
    Err(usage("windcheck needs --values, --kind or --input"))
}

fn cmd_windcheck(cli: &Cli) -> Result<Outcome, CliError> {
    let report = is_windable(&windcheck_function(cli)?)?;
    Ok(Outcome::verdict(json(&ReportJson::from(&report))?, report.is_windable()))
}

#[derive(Serialize)]
struct OracleValue {
    k: usize,
    z: String,
}

#[derive(Serialize)]
struct RatioCheck {
    z2_over_z0: Option<String>,
    bound: Option<String>,
    holds: Option<bool>,
}

#[derive(Serialize)]
struct OracleJson {
    edges: usize,
    half_edges: usize,
    values: Vec<OracleValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<RatioCheck>,
}

fn cmd_oracle(cli: &Cli) -> Result<Outcome, CliError> {
    let input = graph_input(cli)?;
    let inst = input.instance()?;
    let strata = brute_strata(&inst)?;
    let z = |k: usize| strata.get(k).cloned().unwrap_or_else(|| int(0));
    let ks = if cli.k.is_empty() { vec![0] } else { cli.k.clone() };
    let values = ks.iter().map(|&k| OracleValue { k, z: to_fraction_string(&z(k)) }).collect();
    let mut holds = true;
    let ratio = (ks.contains(&0) && ks.contains(&2)).then(|| {
        let edges = input.graph.edges.len();
        let weights = input.effective_weights().ok().flatten();
        let bound = match (input.problem, &weights) {
            (Some(p), w) => p.ratio_bound(edges, w.as_deref()),
            (None, None) => Some(int((4 * edges * edges) as i64)),
            (None, Some(_)) => None,
        };
        let ratio = (z(0) > int(0)).then(|| z(2) / z(0));
        let check = match (&ratio, &bound) {
            (Some(r), Some(b)) => Some(r <= b),
            _ => None,
        };
        holds = check != Some(false);
        RatioCheck {
            z2_over_z0: ratio.as_ref().map(to_fraction_string),
            bound: bound.as_ref().map(to_fraction_string),
            holds: check,
        }
    });
    let out = OracleJson { edges: inst.num_edges(), half_edges: inst.num_half_edges(), values, ratio };
    Ok(Outcome::verdict(json(&out)?, holds))
}

fn cmd_sample(cli: &Cli) -> Result<Outcome, CliError> {
    let input = graph_input(cli)?;
    let inst = input.instance()?;
    let eps = rational_flag("epsilon", &cli.epsilon)?;
    let burn_in = cli.burn_in.unwrap_or_else(|| {
        default_burn_in(inst.num_half_edges(), omega0_lower_bound(inst.num_edges()), to_f64(&eps))
    });
    let records = cli.samples.unwrap_or(1);
    let state = start_state(&inst, None)?;
    let mut chain = Chain::new(&inst, &state);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut text = String::new();
    for _ in 0..records {
        chain.run(burn_in, &mut rng);
        let s = chain.state();
        let rec = TrajectoryRecord {
            step: chain.steps(),
            assignment: s.assignment().to_hex(),
            weight: to_fraction_string(s.weight()),
        };
        text.push_str(&json(&rec)?);
    }
    Ok(Outcome::ok(text))
}

fn cmd_count(cli: &Cli) -> Result<Outcome, CliError> {
    let input = graph_input(cli)?;
    let problem = input.problem.ok_or_else(|| usage("count needs --kind and --b"))?;
    problem.check_supported()?;
    let mut params = CountParams::new(rational_flag("epsilon", &cli.epsilon)?, rational_flag("delta", &cli.delta)?, cli.seed);
    params.samples = cli.samples;
    params.burn_in = cli.burn_in;
    params.thinning = cli.thinning;
    let edges = input.graph.edge_list()?;
    let weights = input.effective_weights()?;
    let n = input.graph.vertices.len();
    let estimate = match problem {
        Problem::BMatching(b) => count_b_matching(n, &edges, b, weights.as_deref(), &params)?,
        Problem::BEdgeCover(b) => count_b_edge_cover(n, &edges, b, weights.as_deref(), &params)?,
    };
    let inst = problem.instance(n, &edges, weights.as_deref())?;
    let oracle = if inst.num_half_edges() <= RATIO_CHECK_LIMIT { Some(brute_z(&inst, 0)?) } else { None };
    Ok(Outcome::ok(json(&EstimateJson::new(&estimate, oracle.as_ref()))?))
}

fn cmd_diagnostics(cli: &Cli) -> Result<Outcome, CliError> {
    let inst = graph_input(cli)?.instance()?;
    let p = transition_matrix(&inst)?;
    let start = start_state(&inst, None)?;
    let index = p.index_of(start.assignment()).expect("start state is enumerated");
    let d: DiagnosticsJson = format::diagnostics(&p, index, cli.m.unwrap_or(20));
    let pass = d.stationary_check == "exact-pass" && d.detailed_balance_check == "exact-pass";
    Ok(Outcome::verdict(json(&d)?, pass))
}

fn cmd_verify(cli: &Cli) -> Result<Outcome, CliError> {
    let suite = cli.suite.as_deref().ok_or_else(|| usage("verify needs a suite name"))?;
    if suite == "diagnostics" {
        return cmd_diagnostics(cli);
    }
    let rows = suites::run(suite, cli.m).ok_or_else(|| {
        usage(format!("unknown suite {suite:?}; known: {}, all, diagnostics", suites::SUITES.join(", ")))
    })?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(Outcome::verdict(suites::table(&rows), passed))
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.suite.is_some() && cli.command != Command::Verify {
        return Err(usage("only verify takes a positional suite name"));
    }
    rational_flag("epsilon", &cli.epsilon)?;
    rational_flag("delta", &cli.delta)?;
    match cli.command {
        Command::Matrix => cmd_matrix(cli),
        Command::Windcheck => cmd_windcheck(cli),
        Command::Oracle => cmd_oracle(cli),
        Command::Sample => cmd_sample(cli),
        Command::Count => cmd_count(cli),
        Command::Verify => cmd_verify(cli),
    }
}

/// Runs a command line and writes its output; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("windmill: {e}");
            return EXIT_ERROR;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    match written {
        Ok(()) => outcome.code,
        Err(msg) => {
            eprintln!("windmill: {msg}");
            EXIT_ERROR
        }
    }
}
