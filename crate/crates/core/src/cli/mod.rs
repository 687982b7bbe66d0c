//! Command-line front end.
//!
//! Each invocation runs one command and writes one JSON report, either to
//! standard output or atomically to `--output`. Failures print a single-line
//! JSON error object on standard error and exit nonzero.

mod amplify;
mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gates::{route_linear, Circuit};
use crate::grover::{run_grover, SearchProblem};
use crate::qft::{build_qft_circuit, qft_fidelity, GateCounts, QftSpec, MAX_FIDELITY_QUBITS};
use crate::rng::{derive_seed, rng_from_seed, DEFAULT_SEED};
use crate::shor::{attempt_circuit_seed, factor, order_finding_state, FactoringInstance};
use crate::simon::{classical_query_baseline, make_oracle, run_simon};
use crate::statevec::StateVector;

pub use amplify::{majority_amplify, MajorityVote};
pub use report::{
    classify, distribution_json, error_json, sig12, write_atomic, ErrorKind, RunReport, REPORT_VERSION,
};

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "QDESK_SEED";

#[derive(Debug, Clone, PartialEq, Parser, Serialize)]
#[command(name = "qdesk", version, about = "Desk-scale quantum algorithm simulator")]
pub struct RunConfig {
    /// Master seed for every random choice in the run.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Write the report here instead of standard output.
    #[arg(long = "output", short = 'o', global = true)]
    pub output_path: Option<PathBuf>,

    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub timing: bool,

    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// Factor an odd composite by order finding.
    Factor(FactorArgs),
    /// Search 2^qubits items for marked indices.
    Grover(GroverArgs),
    /// Recover a hidden xor shift.
    Simon(SimonArgs),
    /// Collision-search baseline for the hidden shift.
    SimonClassical(SimonClassicalArgs),
    /// Gate counts and fidelity of a (possibly truncated) Fourier transform circuit.
    Qft(QftArgs),
    /// Run a circuit file on |0...0> and report the output distribution.
    CircuitRun(CircuitRunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Factor(_) => "factor",
            Command::Grover(_) => "grover",
            Command::Simon(_) => "simon",
            Command::SimonClassical(_) => "simon-classical",
            Command::Qft(_) => "qft",
            Command::CircuitRun(_) => "circuit-run",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize)]
pub struct FactorArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 8)]
    pub max_attempts: usize,
    /// Write the exponent-register distribution of the last circuit run here.
    #[arg(long)]
    pub dump_distribution: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize)]
pub struct GroverArgs {
    #[arg(long)]
    pub qubits: usize,
    /// Marked index; may be repeated.
    #[arg(long)]
    pub target: Vec<usize>,
    /// File of additional marked indices, separated by whitespace or commas.
    #[arg(long)]
    pub targets_file: Option<PathBuf>,
    /// Write the per-iteration marked probability here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize)]
pub struct SimonArgs {
    #[arg(long)]
    pub n: usize,
    /// Hidden shift as an n-character bit string, wire 1 first.
    #[arg(long)]
    pub c: String,
    /// Defaults to 4n.
    #[arg(long)]
    pub max_rounds: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize)]
pub struct SimonClassicalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize)]
pub struct QftArgs {
    #[arg(long)]
    pub qubits: usize,
    #[arg(long)]
    pub cutoff: Option<u32>,
    #[arg(long)]
    pub no_swaps: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize)]
pub struct CircuitRunArgs {
    #[arg(long)]
    pub file: PathBuf,
    /// Register width; defaults to the largest wire in the file.
    #[arg(long)]
    pub wires: Option<usize>,
    /// Insert swaps so every two-qubit gate acts on adjacent wires.
    #[arg(long)]
    pub route_linear: bool,
}

/// Reads a circuit in the line-oriented text format.
pub fn parse_circuit_file(path: &Path, n_wires: Option<usize>) -> Result<Circuit> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Circuit::from_text(&src, n_wires)
}

/// Executes the configured command. Side files (`--trace`,
/// `--dump-distribution`) are written here; the report itself is returned.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let start = Instant::now();
    let result = match &config.command {
        Command::Factor(a) => run_factor(a, config.seed)?,
        Command::Grover(a) => run_grover_cmd(a, config.seed)?,
        Command::Simon(a) => run_simon_cmd(a, config.seed)?,
        Command::SimonClassical(a) => run_simon_classical(a, config.seed)?,
        Command::Qft(a) => run_qft(a)?,
        Command::CircuitRun(a) => run_circuit(a)?,
    };
    Ok(RunReport {
        version: REPORT_VERSION,
        command: config.command.name(),
        config: serde_json::to_value(config).expect("config is serializable"),
        wall_time_ms: config
            .timing
            .then(|| sig12(start.elapsed().as_secs_f64() * 1e3)),
        result,
    })
}

fn run_factor(a: &FactorArgs, seed: u64) -> Result<Value> {
    let report = factor(a.n, a.max_attempts, seed)?;
    if let Some(path) = &a.dump_distribution {
        let last = report.attempts.iter().rev().find(|t| t.measured_c.is_some());
        let dump = match last {
            Some(t) => {
                let inst = FactoringInstance::new(a.n, t.x)?;
                let marginal = order_finding_state(&inst)?
                    .distribution()
                    .marginal(1, 2 * inst.bits)?;
                let dist: serde_json::Map<String, Value> = marginal
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 1e-15)
                    .map(|(c, &p)| (c.to_string(), json!(sig12(p))))
                    .collect();
                json!({
                    "N": a.n,
                    "x": t.x,
                    "Q": inst.q(),
                    "circuit_seed": attempt_circuit_seed(seed, t.index),
                    "distribution": dist,
                })
            }
            None => json!({ "N": a.n, "x": null, "Q": null, "circuit_seed": null, "distribution": {} }),
        };
        write_atomic(path, &pretty(&dump))?;
    }
    Ok(serde_json::to_value(&report).expect("factor report is serializable"))
}

fn parse_targets(src: &str) -> Result<Vec<usize>> {
    src.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::invalid("targets_file", format!("`{t}` is not an index")))
        })
        .collect()
}

fn run_grover_cmd(a: &GroverArgs, seed: u64) -> Result<Value> {
    let mut targets = a.target.clone();
    if let Some(path) = &a.targets_file {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        targets.extend(parse_targets(&src)?);
    }
    if targets.is_empty() {
        return Err(Error::invalid("target", "give --target or --targets-file"));
    }
    targets.sort_unstable();
    targets.dedup();
    let problem = SearchProblem::with_targets(a.qubits, &targets)?;
    let run = run_grover(&problem, seed)?;
    if let Some(path) = &a.trace {
        let trace = json!({
            "qubits": a.qubits,
            "targets": targets,
            "marked_probability": report::sig12_all(&run.trace),
        });
        write_atomic(path, &pretty(&trace))?;
    }
    Ok(json!({
        "qubits": a.qubits,
        "N": problem.size(),
        "targets": targets,
        "iterations": run.iterations,
        "oracle_calls": run.oracle_calls,
        "found": run.found,
        "success": run.success,
        "success_probability": sig12(run.success_probability),
    }))
}

fn parse_bitstring(s: &str, n: usize) -> Result<u64> {
    if s.len() != n || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::invalid("c", format!("`{s}` is not a {n}-bit string")));
    }
    u64::from_str_radix(s, 2).map_err(|e| Error::invalid("c", e.to_string()))
}

fn bitstring(v: u64, n: usize) -> String {
    format!("{v:0n$b}")
}

fn run_simon_cmd(a: &SimonArgs, seed: u64) -> Result<Value> {
    let c = parse_bitstring(&a.c, a.n)?;
    let oracle = make_oracle(a.n, c, derive_seed(seed, 0))?;
    let run = run_simon(&oracle, a.max_rounds.unwrap_or(4 * a.n), derive_seed(seed, 1))?;
    Ok(json!({
        "n": a.n,
        "recovered_c": bitstring(run.shift, a.n),
        "correct": run.shift == c,
        "rounds": run.rounds,
        "samples": run.samples.iter().map(|&y| bitstring(y, a.n)).collect::<Vec<_>>(),
        "oracle_calls": run.oracle_calls,
        "hadamards": run.hadamards,
    }))
}

fn run_simon_classical(a: &SimonClassicalArgs, seed: u64) -> Result<Value> {
    use rand::Rng;
    if a.trials == 0 {
        return Err(Error::invalid("trials", "must be positive"));
    }
    if a.n == 0 || a.n > crate::simon::MAX_CLASSICAL_BITS {
        return Err(Error::invalid(
            "n",
            format!("{} is outside 1..={}", a.n, crate::simon::MAX_CLASSICAL_BITS),
        ));
    }
    let mut queries = Vec::with_capacity(a.trials);
    let mut recovered = 0;
    for i in 0..a.trials {
        let sub = derive_seed(seed, i as u64);
        let c = rng_from_seed(sub).gen_range(1..1u64 << a.n);
        let oracle = make_oracle(a.n, c, derive_seed(sub, 0))?;
        let run = classical_query_baseline(&oracle, derive_seed(sub, 1))?;
        queries.push(run.queries);
        recovered += usize::from(run.shift == c);
    }
    let mut sorted = queries.clone();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid] as f64
    } else {
        (sorted[mid - 1] + sorted[mid]) as f64 / 2.0
    };
    let mean = queries.iter().sum::<usize>() as f64 / queries.len() as f64;
    Ok(json!({
        "n": a.n,
        "trials": a.trials,
        "recovered": recovered,
        "min": sorted[0],
        "median": median,
        "mean": sig12(mean),
        "max": sorted[sorted.len() - 1],
        "queries": queries,
    }))
}

fn run_qft(a: &QftArgs) -> Result<Value> {
    let mut spec = QftSpec::exact(a.qubits);
    if let Some(m) = a.cutoff {
        spec = spec.with_cutoff(m);
    }
    if a.no_swaps {
        spec = spec.without_swaps();
    }
    let circuit = build_qft_circuit(&spec)?;
    let counts = GateCounts::of(&circuit);
    let fidelity = if a.qubits <= MAX_FIDELITY_QUBITS {
        json!(sig12(qft_fidelity(a.qubits, &circuit)?))
    } else {
        Value::Null
    };
    Ok(json!({
        "qubits": a.qubits,
        "cutoff": a.cutoff,
        "swaps": !a.no_swaps,
        "gate_counts": counts,
        "hadamard_and_phase": counts.hadamard_and_phase(),
        "fidelity": fidelity,
    }))
}

fn run_circuit(a: &CircuitRunArgs) -> Result<Value> {
    let mut circuit = parse_circuit_file(&a.file, a.wires)?;
    if a.route_linear {
        circuit = route_linear(&circuit)?;
    }
    let out = StateVector::basis(circuit.n_wires(), 0)?.run_circuit(&circuit)?;
    Ok(json!({
        "wires": circuit.n_wires(),
        "gates": circuit.len(),
        "routed": a.route_linear,
        "distribution": distribution_json(&out.distribution()),
    }))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

/// Parses arguments, runs, writes output, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as Kind;
            if matches!(e.kind(), Kind::DisplayHelp | Kind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let obj = json!({ "error": { "kind": "usage", "message": e.to_string().trim_end() } });
            eprintln!("{obj}");
            return ErrorKind::Usage.exit_code();
        }
    };
    let outcome = run(&config).and_then(|report| {
        let text = report.to_json();
        match &config.output_path {
            Some(path) => write_atomic(path, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            classify(&e).exit_code()
        }
    }
}
