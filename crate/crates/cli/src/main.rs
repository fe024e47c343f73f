use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use binapprox_cli::bench::{Sweep, DEFAULT_CELL_TIMEOUT};
use binapprox_cli::generate::{generate, GenerateRequest};
use binapprox_cli::instance::{parse_pattern, InstanceFile};
use binapprox_cli::record::{Algorithm, Problem, ResultRecord};
use binapprox_cli::solve::{solve, Limits, SolveRequest};
use binapprox_cli::verify::{verify, Bounds};
use binapprox_cli::{CliError, CliResult};
use clap::{Args, Parser, Subcommand};

/// Exact solvers for binary matrix approximation.
///
/// Exit status: 0 success, 1 witness rejected or algorithms disagree,
/// 2 bad arguments, 3 unreadable instance, 4 algorithm not available for the
/// problem, 5 node or time limit reached, 6 malformed witness, 7 invalid
/// request. With --decision-exit, solve exits 10 on yes and 11 on no.
#[derive(Parser)]
#[command(name = "binapprox", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print a JSON result record
    Solve(SolveArgs),
    /// Write a planted instance
    Generate(GenerateArgs),
    /// Re-check the witnesses in a result file against an instance
    Verify(VerifyArgs),
    /// Sweep planted instances and write a CSV table
    Bench(BenchArgs),
}

#[derive(Args)]
struct LimitArgs {
    /// Stop after this many search nodes
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Stop after this many milliseconds
    #[arg(long)]
    timeout_ms: Option<u64>,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits { max_nodes: self.max_nodes, timeout: self.timeout_ms.map(Duration::from_millis) }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Instance file
    instance: PathBuf,
    /// Rank or number of means (defaults to the instance's r)
    #[arg(short)]
    r: Option<usize>,
    /// Edit budget (defaults to the instance's k)
    #[arg(short, conflicts_with = "optimize")]
    k: Option<usize>,
    /// Find the smallest budget instead of deciding one
    #[arg(long)]
    optimize: bool,
    /// Largest budget tried with --optimize
    #[arg(long)]
    max_k: Option<usize>,
    /// Pattern rows separated by ';', e.g. 01;11
    #[arg(long)]
    pattern: Option<String>,
    /// Seed for randomized algorithms
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random colorings to try
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    limits: LimitArgs,
    /// Append the record to this file instead of printing it
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Exit 10 on yes and 11 on no
    #[arg(long)]
    decision_exit: bool,
    /// Skip the human-readable summary on stderr
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(short)]
    r: Option<usize>,
    #[arg(long)]
    pattern: Option<String>,
    /// Number of distinct entries flipped after planting
    #[arg(long, default_value_t = 0)]
    flips: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    instance: PathBuf,
    /// File of JSON result records, one per line
    witness: PathBuf,
    #[arg(short)]
    r: Option<usize>,
    #[arg(short)]
    k: Option<usize>,
    #[arg(long)]
    pattern: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "4")]
    rows: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "4")]
    cols: Vec<usize>,
    #[arg(short, value_delimiter = ',', num_args = 0.., default_value = "1")]
    r: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "0,2")]
    flips: Vec<usize>,
    #[arg(short, value_delimiter = ',', num_args = 0.., default_value = "0,1,2")]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "0")]
    seeds: Vec<u64>,
    /// Defaults to every algorithm available for the problem
    #[arg(long, value_enum, value_delimiter = ',')]
    algorithms: Vec<Algorithm>,
    #[arg(long)]
    pattern: Option<String>,
    #[command(flatten)]
    limits: LimitArgs,
    /// Leave out the time column so tables are reproducible
    #[arg(long)]
    omit_time: bool,
    /// Write here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn emit(line: &str, output: Option<&PathBuf>) -> CliResult<()> {
    match output {
        Some(path) => writeln!(OpenOptions::new().create(true).append(true).open(path)?, "{line}")?,
        None => println!("{line}"),
    }
    Ok(())
}

fn run_solve(args: SolveArgs) -> CliResult<u8> {
    let file = InstanceFile::read(&args.instance)?;
    let pattern = match &args.pattern {
        Some(p) => Some(parse_pattern(p)?),
        None => file.pattern_meta()?,
    };
    let k = match (args.k, args.optimize) {
        (Some(k), _) => Some(k),
        (None, true) => None,
        (None, false) => Some(
            file.usize_meta("k")?
                .ok_or_else(|| CliError::Usage("give -k, --optimize, or a k in the instance".into()))?,
        ),
    };
    let req = SolveRequest {
        r: args.r.or(file.usize_meta("r")?),
        k,
        pattern,
        max_k: args.max_k,
        limits: args.limits.limits(),
        seed: args.seed,
        trials: args.trials,
        ..SolveRequest::new(args.problem, args.algorithm)
    };
    let record = solve(&file.matrix, &req)?;
    let line = serde_json::to_string(&record).expect("records serialize");
    emit(&line, args.output.as_ref())?;
    if !args.quiet {
        let answer = if record.decision { "yes" } else { "no" };
        let cost = record.cost.map_or(String::new(), |c| format!(", {c} edits"));
        eprintln!(
            "{} / {}: {answer}{cost} ({} nodes, {:.1} ms)",
            args.problem.tag(),
            record.algorithm.tag(),
            record.nodes,
            record.wall_ms
        );
    }
    Ok(match (args.decision_exit, record.decision) {
        (false, _) => 0,
        (true, true) => 10,
        (true, false) => 11,
    })
}

fn run_generate(args: GenerateArgs) -> CliResult<u8> {
    let req = GenerateRequest {
        problem: args.problem,
        rows: args.rows,
        cols: args.cols,
        r: args.r,
        pattern: args.pattern.as_deref().map(parse_pattern).transpose()?,
        flips: args.flips,
        seed: args.seed,
    };
    let file = generate(&req)?;
    match &args.output {
        Some(path) => file.write(path)?,
        None => print!("{file}"),
    }
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> CliResult<u8> {
    let file = InstanceFile::read(&args.instance)?;
    let text = std::fs::read_to_string(&args.witness)?;
    let bounds = Bounds {
        r: args.r.or(file.usize_meta("r")?),
        k: args.k,
        pattern: args.pattern.or_else(|| file.meta.get("pattern").cloned()),
    };
    let mut all_pass = true;
    let mut seen = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let record: ResultRecord =
            serde_json::from_str(line).map_err(|e| CliError::MalformedWitness(e.to_string()))?;
        if record.problem != args.problem {
            return Err(CliError::MalformedWitness(format!("record is for {:?}", record.problem)));
        }
        let verdict = verify(args.problem, &file.matrix, &record, &bounds)?;
        if verdict.passed() {
            println!("PASS cost={}", verdict.cost);
        } else {
            println!("FAIL cost={}: {}", verdict.cost, verdict.failures.join("; "));
            all_pass = false;
        }
        seen += 1;
    }
    if seen == 0 {
        return Err(CliError::MalformedWitness("no records found".into()));
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn run_bench(args: BenchArgs) -> CliResult<u8> {
    let algorithms =
        if args.algorithms.is_empty() { Algorithm::available(args.problem).to_vec() } else { args.algorithms };
    let mut limits = args.limits.limits();
    limits.timeout = limits.timeout.or(Some(DEFAULT_CELL_TIMEOUT));
    let sweep = Sweep {
        problem: args.problem,
        rows: args.rows,
        cols: args.cols,
        ranks: args.r,
        flips: args.flips,
        budgets: args.k,
        seeds: args.seeds,
        algorithms,
        pattern: args.pattern.as_deref().map(parse_pattern).transpose()?,
        limits,
        omit_time: args.omit_time,
    };
    let agree = match &args.output {
        Some(path) => sweep.run(std::fs::File::create(path)?)?,
        None => sweep.run(std::io::stdout().lock())?,
    };
    if !agree {
        eprintln!("algorithms disagree on at least one cell");
    }
    Ok(if agree { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Generate(args) => run_generate(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
