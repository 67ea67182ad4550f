use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{error::ErrorKind, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twreduce::bench::{self, Answer, BenchConfig, GeneratorSpec, Instance, KTreeSpec, Problem, SCHEMA_VERSION};
use twreduce::decomposition::{heuristic_decompose, nicify, parse_td, Strategy};
use twreduce::engine::{HamiltonMode, RunLimits};
use twreduce::graph::{parse_gr, parse_terminals};
use twreduce::stats::{PolicyKind, ReducePolicy, RunStats};
use twreduce::verify::{self, Suite};
use twreduce::Error;

#[derive(Parser)]
#[command(name = "twreduce", version, about = "Connectivity problems on tree decompositions with rank-based table reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print a JSON result.
    Solve(SolveArgs),
    /// Print a tree decomposition (.td) computed by an elimination heuristic.
    Decompose(DecomposeArgs),
    /// Run randomized checks against the brute-force oracles.
    Verify(VerifyArgs),
    /// Run many instances under several policies and report statistics.
    Bench(BenchArgs),
    /// Print the JSON schema of all outputs.
    Schema,
}

#[derive(Parser)]
struct SolveArgs {
    problem: Problem,
    /// Graph in .gr format.
    #[arg(long)]
    gr: PathBuf,
    /// Tree decomposition; a min-fill heuristic is used when absent.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Terminal list, required for steiner.
    #[arg(long)]
    terminals: Option<PathBuf>,
    /// Only for hamilton: decide existence or minimize weight.
    #[arg(long, value_enum)]
    mode: Option<HamiltonMode>,
    #[arg(long, value_enum, default_value = "threshold")]
    policy: PolicyKind,
    /// Row budget for the threshold policy (default 2^(width+1)).
    #[arg(long)]
    threshold: Option<usize>,
    #[arg(long, value_enum, default_value = "min-fill")]
    strategy: Strategy,
    /// Reduce Hamiltonian tables with the general partition reduce.
    #[arg(long)]
    general_reduce: bool,
    /// Seconds before giving up.
    #[arg(long)]
    timeout: Option<f64>,
    /// Exit with status 1 when the instance is infeasible.
    #[arg(long)]
    expect_feasible: bool,
    /// Include the table size after every node in the stats.
    #[arg(long)]
    per_node_rows: bool,
    /// Indent the JSON output.
    #[arg(long)]
    pretty: bool,
}

#[derive(Parser)]
struct DecomposeArgs {
    #[arg(long)]
    gr: PathBuf,
    #[arg(long, value_enum, default_value = "min-fill")]
    strategy: Strategy,
}

#[derive(Parser)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
struct BenchArgs {
    /// Directory of .gr files with optional .td and .terminals siblings.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Number of random partial k-trees to generate.
    #[arg(long, default_value_t = 0)]
    generate: usize,
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Probability of keeping each k-tree edge.
    #[arg(long, default_value_t = 0.8)]
    keep: f64,
    #[arg(long, default_value_t = 100)]
    max_weight: u64,
    /// Terminals per generated Steiner instance.
    #[arg(long = "steiner-terminals", default_value_t = 5)]
    steiner_terminals: usize,
    /// Generate path decompositions instead of random trees.
    #[arg(long)]
    path_like: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, num_args = 1.., default_values = ["hamilton"])]
    problem: Vec<Problem>,
    #[arg(long, value_enum, num_args = 1.., default_values = ["never", "always", "threshold"])]
    policy: Vec<PolicyKind>,
    #[arg(long)]
    threshold: Option<usize>,
    /// Seconds allowed per (instance, policy) run.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    per_node_rows: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Serialize)]
struct SolveOutput {
    schema_version: &'static str,
    kind: &'static str,
    problem: Problem,
    policy: PolicyKind,
    threshold: Option<usize>,
    answer: Answer,
    feasible: bool,
    n: usize,
    m: usize,
    width: usize,
    decomposition: &'static str,
    stats: RunStats,
}

enum Failure {
    Usage(clap::Error),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T, Error>) -> Result<T, Error> {
    r.map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn timeout(secs: Option<f64>) -> Result<Option<Duration>, Error> {
    secs.map(|s| Duration::try_from_secs_f64(s).map_err(|_| Error::Input(format!("bad timeout {s}"))))
        .transpose()
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    text.expect("outputs serialize")
}

fn usage(kind: ErrorKind, msg: &str) -> Failure {
    Failure::Usage(Cli::command().error(kind, msg))
}

fn solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    let problem = match (args.problem, args.mode) {
        (Problem::Hamilton, Some(HamiltonMode::Tsp)) => Problem::Tsp,
        (Problem::Tsp, Some(HamiltonMode::Decision)) => {
            return Err(usage(ErrorKind::ArgumentConflict, "`solve tsp` minimizes weight; use `solve hamilton --mode decision`"));
        }
        (Problem::Steiner, Some(_)) => {
            return Err(usage(ErrorKind::ArgumentConflict, "--mode only applies to hamilton and tsp"));
        }
        (p, _) => p,
    };
    if problem != Problem::Steiner && args.terminals.is_some() {
        return Err(usage(ErrorKind::ArgumentConflict, "--terminals only applies to steiner"));
    }
    let policy = ReducePolicy::from_kind(args.policy, args.threshold)?;
    let graph = in_file(&args.gr, parse_gr(&read(&args.gr)?))?;
    let terminals = match (&args.terminals, problem) {
        (Some(p), _) => Some(in_file(p, parse_terminals(&read(p)?, graph.n()))?),
        (None, Problem::Steiner) => return Err(usage(ErrorKind::MissingRequiredArgument, "steiner needs --terminals")),
        (None, _) => None,
    };
    let (td, decomposition) = match &args.td {
        Some(p) => (in_file(p, parse_td(&read(p)?))?, "supplied"),
        None => (
            heuristic_decompose(&graph, args.strategy),
            match args.strategy {
                Strategy::MinDegree => "min-degree",
                Strategy::MinFill => "min-fill",
            },
        ),
    };
    let nd = nicify(&td, &graph)?;
    let inst = Instance {
        name: args.gr.display().to_string(),
        graph,
        terminals,
        td: None,
    };
    let limits = RunLimits {
        deadline: timeout(args.timeout)?.map(|d| Instant::now() + d),
        per_node_rows: args.per_node_rows,
    };
    let (answer, stats) = bench::solve_problem(problem, &inst, &nd, policy, args.general_reduce, limits)?;
    let out = SolveOutput {
        schema_version: SCHEMA_VERSION,
        kind: "solve",
        problem,
        policy: policy.kind,
        threshold: policy.threshold,
        answer,
        feasible: answer.is_feasible(),
        n: inst.graph.n(),
        m: inst.graph.m(),
        width: nd.width(),
        decomposition,
        stats,
    };
    println!("{}", to_json(&out, args.pretty));
    Ok(if args.expect_feasible && !answer.is_feasible() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn decompose(args: DecomposeArgs) -> Result<ExitCode, Failure> {
    let graph = in_file(&args.gr, parse_gr(&read(&args.gr)?))?;
    print!("{}", heuristic_decompose(&graph, args.strategy).to_td());
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let report = verify::run(args.suite, args.trials, args.seed)?;
    println!("{}", to_json(&report, args.pretty));
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_bench(args: BenchArgs) -> Result<ExitCode, Failure> {
    let mut instances = match &args.dir {
        Some(dir) => bench::load_dir(dir)?,
        None => Vec::new(),
    };
    if args.generate > 0 {
        instances.extend(bench::generate(&GeneratorSpec {
            count: args.generate,
            ktree: KTreeSpec {
                n: args.n,
                k: args.k,
                keep: args.keep,
                max_weight: args.max_weight,
                path_like: args.path_like,
            },
            terminals: args.steiner_terminals,
            seed: args.seed,
        })?);
    }
    let policies = args
        .policy
        .iter()
        .map(|&kind| {
            let threshold = if kind == PolicyKind::Threshold { args.threshold } else { None };
            ReducePolicy::from_kind(kind, threshold)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = BenchConfig {
        problems: args.problem.clone(),
        policies,
        timeout: timeout(args.timeout)?,
        per_node_rows: args.per_node_rows,
    };
    let records = bench::run_bench(&instances, &cfg)?;
    match args.format {
        Format::Json => println!("{}", bench::to_json(&records, args.pretty)?),
        Format::Csv => print!("{}", bench::to_csv(&records)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Decompose(a) => decompose(a),
        Command::Verify(a) => run_verify(a),
        Command::Bench(a) => run_bench(a),
        Command::Schema => {
            println!("{}", to_json(&twreduce::schema::schema(), true));
            Ok(ExitCode::SUCCESS)
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(e)) => e.exit(),
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
