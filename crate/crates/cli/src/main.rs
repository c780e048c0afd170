//! `ecp`: generate sparse-recovery instances, measure them, recover them and
//! verify the result.
//!
//! Usage:
//!   ecp gen --family fourier --n 19 --t 3 --k 5 --seed 7 > inst.json
//!   ecp recover inst.json
//!   ecp verify --oracle inst.json
//!   ecp check --family vandermonde --nodes 1,2,3,4 --k 2 --t 2
//!
//! Exit codes: 0 success, 1 I/O error, 2 invalid configuration,
//! 3 measurements inconsistent with the sparsity budget.

mod commands;
mod error;
mod schema;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ecp_core::{MatrixFamily, MeasurementPlan, Tolerances};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::GenRequest;
use crate::error::CliError;
use crate::schema::{InstanceFile, StrategySpec};

#[derive(Parser)]
#[command(name = "ecp", version, about = "Sparse recovery from evenly spaced structured measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random sparse instance with its measurements.
    Gen(GenArgs),
    /// Fill in the measurements of an instance's ground-truth vector.
    Measure(MeasureArgs),
    /// Recover the sparse vector from an instance's measurements.
    Recover(RecoverArgs),
    /// Recover and compare with the ground truth, optionally against the
    /// brute-force oracle.
    Verify(VerifyArgs),
    /// Run the validity checks for a family and plan.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Fourier,
    Vandermonde,
    Cauchy,
    Hilbert,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Vector length. Defaults to the number of nodes when `--nodes` is given.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated nodes such as `1,2.5,0.5-1i`. Vandermonde nodes, or
    /// the `x` values of a Cauchy family. Vandermonde defaults to `1..=n`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nodes: Option<Vec<Complex64>>,
    /// Comma-separated `y` values of a Cauchy family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    poles: Option<Vec<Complex64>>,
}

impl FamilyArgs {
    fn build(&self) -> Result<MatrixFamily, CliError> {
        let need_n = || self.n.ok_or_else(|| CliError::Invalid("--n is required for this family".into()));
        let family = match self.family {
            FamilyKind::Fourier => MatrixFamily::fourier(need_n()?)?,
            FamilyKind::Hilbert => MatrixFamily::hilbert(need_n()?)?,
            FamilyKind::Vandermonde => {
                let nodes = match &self.nodes {
                    Some(nodes) => nodes.clone(),
                    None => (1..=need_n()?).map(|x| Complex64::new(x as f64, 0.0)).collect(),
                };
                MatrixFamily::vandermonde(nodes)?
            }
            FamilyKind::Cauchy => {
                let (Some(x), Some(y)) = (&self.nodes, &self.poles) else {
                    return Err(CliError::Invalid("cauchy needs --nodes and --poles".into()));
                };
                MatrixFamily::cauchy(x.clone(), y.clone())?
            }
        };
        if let Some(n) = self.n {
            if n != family.n() {
                return Err(CliError::Invalid(format!("--n {n} does not match {} nodes", family.n())));
            }
        }
        Ok(family)
    }
}

#[derive(Args)]
struct PlanArgs {
    /// Step between measured rows.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// First measured row.
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Number of measurements; defaults to `2t`.
    #[arg(long)]
    count: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    plan: PlanArgs,
    /// Decoding radius.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Nonzeros in the generated vector; defaults to `t`.
    #[arg(long)]
    sparsity: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Measure through a random error-correcting pair instead of the plan.
    #[arg(long, value_enum)]
    pair_strategy: Option<StrategySpec>,
    /// Skip the plan validity check.
    #[arg(long)]
    force: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MeasureArgs {
    input: PathBuf,
    /// Skip the plan validity check.
    #[arg(long)]
    force: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    /// Instance files; several files are processed as a batch.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Worker threads for batches.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct RecoverArgs {
    #[command(flatten)]
    batch: BatchArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    batch: BatchArgs,
    /// Cross-check against brute-force support enumeration when small enough.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    plan: PlanArgs,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Seed for sampled rank checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports always serialize");
    text.push('\n');
    text
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    InstanceFile::from_json(&text)
}

#[derive(Serialize)]
struct BatchEntry<T> {
    input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    exit_code: i32,
}

/// Runs `job` on every input. A single input prints its report directly;
/// several print an array of per-file entries and exit with the largest
/// code among them.
fn run_batch<T, F>(args: &BatchArgs, job: F) -> Result<i32, CliError>
where
    T: Serialize + Send,
    F: Fn(InstanceFile) -> Result<T, CliError> + Sync,
{
    if let [path] = args.inputs.as_slice() {
        let report = job(read_instance(path)?)?;
        emit(&to_json(&report), None)?;
        return Ok(0);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let entries: Vec<BatchEntry<T>> = pool.install(|| {
        args.inputs
            .par_iter()
            .map(|path| {
                let input = path.display().to_string();
                match read_instance(path).and_then(&job) {
                    Ok(result) => BatchEntry {
                        input,
                        result: Some(result),
                        error: None,
                        exit_code: 0,
                    },
                    Err(e) => BatchEntry {
                        input,
                        result: None,
                        error: Some(e.to_string()),
                        exit_code: e.exit_code(),
                    },
                }
            })
            .collect()
    });
    emit(&to_json(&entries), None)?;
    Ok(entries.iter().map(|e| e.exit_code).max().unwrap_or(0))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let tol = Tolerances::default();
    match cli.command {
        Command::Gen(args) => {
            let req = GenRequest {
                family: args.family.build()?,
                t: args.t,
                sparsity: args.sparsity.unwrap_or(args.t),
                start: args.plan.start,
                step: args.plan.k,
                count: args.plan.count.unwrap_or(2 * args.t),
                seed: args.seed,
                pair_strategy: args.pair_strategy,
                force: args.force,
            };
            let file = commands::generate(&req, &tol)?;
            emit(&file.to_json(), args.output.as_deref())?;
            Ok(0)
        }
        Command::Measure(args) => {
            let file = commands::measure(read_instance(&args.input)?, args.force, &tol)?;
            emit(&file.to_json(), args.output.as_deref())?;
            Ok(0)
        }
        Command::Recover(args) => run_batch(&args.batch, |file| commands::recover_instance(&file, &tol)),
        Command::Verify(args) => run_batch(&args.batch, |file| commands::verify_instance(file, args.oracle, &tol)),
        Command::Check(args) => {
            let family = args.family.build()?;
            let plan = MeasurementPlan::arithmetic(args.plan.start, args.plan.k, args.plan.count.unwrap_or(2 * args.t))?;
            let report = commands::check(&family, &plan, args.seed, &tol)?;
            emit(&to_json(&report), None)?;
            Ok(if report.valid { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("ecp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
