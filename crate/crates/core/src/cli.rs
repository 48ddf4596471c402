//! Command-line front end. [`run`] returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{run_bench, BenchAlg, BenchConfig};
use crate::csp::{parse_instance, write_instance, Instance, TriangleFreeReport};
use crate::error::Error;
use crate::gen::{generate, GenKind, GenSpec};
use crate::oracle::value_distribution;
use crate::solve::{solve, Algorithm, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_ASSERTION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cspadv", version, about = "Beat the random assignment on bounded-degree CSPs")]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "CSPADV_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run a solver and print a JSON report.
    Solve(SolveArgs),
    /// Validate an instance or test structural properties.
    Check(CheckArgs),
    /// Sweep D and seeds, printing CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long = "d", default_value_t = 0)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveAlg {
    Xor3,
    Advrand,
    Trifree,
    Brute,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub alg: SolveAlg,
    pub file: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Deterministic xor3 via the 4-wise independent space.
    #[arg(long)]
    pub derand: bool,
    /// Scale of the advrand target in units of `√(m/D)`.
    #[arg(long)]
    pub t_scale: Option<f64>,
    /// Repetition budget for advrand and trifree.
    #[arg(long)]
    pub reps: Option<usize>,
    /// z-trial budget for xor3.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Write the assignment as a JSON array of ±1.
    #[arg(long)]
    pub assignment: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub triangle_free: bool,
    /// Histogram of satisfied counts over all assignments.
    #[arg(long)]
    pub distribution: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub alg: BenchAlg,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long = "d", value_delimiter = ',', default_values_t = [4, 16, 64])]
    pub ds: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// Master seed for row seed derivation.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exit with code 4 when a threshold check fails.
    #[arg(long = "assert")]
    pub check: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_precondition() { EXIT_PRECONDITION } else { EXIT_SPEC };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_SPEC, message: format!("{}: {e}", path.display()) }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(parse_instance(&text).map_err(Error::from)?)
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn cmd_gen(args: &GenArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let spec = GenSpec { kind: args.kind, n: args.n, k: args.k, d: args.d, seed: args.seed };
    let generated = generate(&spec).map_err(|e| Failure { code: EXIT_SPEC, message: e.to_string() })?;
    let mut comments = vec![format!(
        "gen kind={} n={} k={} D={} seed={}",
        spec.kind, spec.n, spec.k, spec.d, spec.seed
    )];
    comments.extend(generated.notes);
    emit(args.out.as_deref(), &write_instance(&generated.instance, &comments), stdout)
}

fn cmd_solve(args: &SolveArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let inst = read_instance(&args.file)?;
    let alg = match args.alg {
        SolveAlg::Xor3 if args.derand => Algorithm::Xor3Derand,
        SolveAlg::Xor3 => Algorithm::Xor3,
        SolveAlg::Advrand => Algorithm::Advrand,
        SolveAlg::Trifree => Algorithm::Trifree,
        SolveAlg::Brute => Algorithm::Brute,
    };
    let opts = SolveOptions { trials: args.trials, t_scale: args.t_scale, reps: args.reps };
    let (x, report) = solve(&inst, alg, args.seed, &opts)?;
    if let Some(path) = &args.assignment {
        let text = serde_json::to_string(&x).expect("assignment serializes");
        fs::write(path, text).map_err(|e| io_failure(path, e))?;
    }
    emit(None, &(report.to_json() + "\n"), stdout)
}

fn cmd_check(args: &CheckArgs, stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let inst = read_instance(&args.file)?;
    let validation = inst.validate();
    let mut out = json!({
        "n": inst.n(),
        "m": inst.m(),
        "D": inst.max_degree(),
        "valid": validation.is_ok(),
        "violations": validation.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    let mut failure = None;
    if !validation.is_ok() {
        failure = Some(Error::Invalid(validation).into());
    }
    if args.triangle_free {
        let report = inst.check_triangle_free();
        out["triangle_free"] = serde_json::to_value(&report).expect("report serializes");
        if report != TriangleFreeReport::Ok && failure.is_none() {
            failure = Some(Error::NotTriangleFree(report).into());
        }
    }
    if args.distribution {
        let hist = value_distribution(&inst)?;
        out["distribution"] = json!(hist);
    }
    emit(None, &(out.to_string() + "\n"), stdout)?;
    failure.map_or(Ok(()), Err)
}

fn cmd_bench(args: &BenchArgs, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let cfg = BenchConfig {
        alg: args.alg,
        n: args.n,
        k: args.k,
        ds: args.ds.clone(),
        seeds: args.seeds,
        master_seed: args.seed,
    };
    let result = run_bench(&cfg).map_err(|e| Failure { code: EXIT_SPEC, message: e.to_string() })?;
    emit(args.out.as_deref(), &result.to_csv(), stdout)?;
    for c in &result.checks {
        let _ = writeln!(stderr, "{c}");
    }
    if args.check && !result.passed() {
        return Err(Failure { code: EXIT_ASSERTION, message: "threshold check failed".into() });
    }
    Ok(())
}

/// Parses `argv` and runs the command, writing results to `stdout` and
/// diagnostics to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_SPEC } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_SPEC;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Gen(a) => cmd_gen(a, stdout),
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Check(a) => cmd_check(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout, stderr),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
