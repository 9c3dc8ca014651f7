//! Batch command-line front end for `partial-sums`.
//!
//! Exit codes: 0 on success, 1 on a contract violation (index out of range,
//! overflow, search value out of range, failed self-test), 2 on malformed
//! input or arguments.

pub mod array_file;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use partial_sums::bench::{run_bench, OpMix};
use partial_sums::oracle::run_differential;
use partial_sums::sampler::RNG_NAME;
use partial_sums::trace::{render, TraceKind};
use partial_sums::{CheckedI64, PartialSumTree, WeightedSampler};

#[derive(Debug)]
pub enum CliError {
    /// Exit code 1.
    Contract(String),
    /// Exit code 2.
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Contract(_) => 1,
            CliError::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Contract(m) | CliError::Input(m) => m,
        }
    }
}

impl From<partial_sums::Error> for CliError {
    fn from(e: partial_sums::Error) -> Self {
        CliError::Contract(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "psum", version, about = "Logarithmic-time partial sums over integer arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate an array file and write it back out normalized
    Build {
        input: PathBuf,
        output: PathBuf,
        /// Also print the stored cells, one per line
        #[arg(long)]
        cells: bool,
    },
    /// Print X[k]
    Get {
        file: PathBuf,
        #[arg(allow_negative_numbers = true)]
        k: i64,
    },
    /// Print X[j] + ... + X[k] (empty when k = j - 1)
    #[command(allow_negative_numbers = true)]
    Sum { file: PathBuf, j: i64, k: i64 },
    /// Print X[k] + ... + X[M-1]
    Suffix {
        file: PathBuf,
        #[arg(allow_negative_numbers = true)]
        k: i64,
    },
    /// Add d to X[k] and rewrite the file
    #[command(allow_negative_numbers = true)]
    Inc { file: PathBuf, k: i64, d: i64 },
    /// Set X[k] to x and rewrite the file
    #[command(allow_negative_numbers = true)]
    Set { file: PathBuf, k: i64, x: i64 },
    /// Print k with suffix(k+1) <= x < suffix(k)
    Find {
        file: PathBuf,
        #[arg(allow_negative_numbers = true)]
        x: i64,
    },
    /// Draw events with probability proportional to the values and print counts
    Sample {
        file: PathBuf,
        #[arg(long)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count loop iterations and time operations against the naive array
    Bench {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        ops: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative frequencies, e.g. `inc:2,sum:1,get:1,find:1`
        #[arg(long, value_parser = parse_mix, default_value = "inc:1,sum:1,get:1,find:1")]
        mix: OpMix,
    },
    /// Differential test of the tree against the naive array
    Selftest {
        #[arg(long = "max-m", default_value_t = 64)]
        max_m: usize,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Operations per random sequence
        #[arg(long, default_value_t = 100)]
        ops: usize,
    },
    /// Print the loop trace of sumN, get, inc or find
    Trace {
        file: PathBuf,
        op: String,
        #[arg(allow_negative_numbers = true, num_args = 0..)]
        args: Vec<i64>,
    },
}

fn parse_mix(s: &str) -> Result<OpMix, String> {
    let mut mix = OpMix { inc: 0, sum: 0, get: 0, find: 0 };
    for part in s.split(',') {
        let (name, weight) = part.split_once(':').ok_or_else(|| format!("expected name:weight, found `{part}`"))?;
        let weight: u32 = weight.parse().map_err(|e| format!("`{part}`: {e}"))?;
        match name {
            "inc" => mix.inc = weight,
            "sum" => mix.sum = weight,
            "get" => mix.get = weight,
            "find" => mix.find = weight,
            _ => return Err(format!("unknown operation `{name}`")),
        }
    }
    if mix.inc + mix.sum + mix.get + mix.find == 0 {
        return Err("mix has no operations".into());
    }
    Ok(mix)
}

fn index(k: i64) -> Result<usize, CliError> {
    usize::try_from(k).map_err(|_| CliError::Contract(format!("index {k} out of range")))
}

fn load(path: &Path) -> Result<PartialSumTree<CheckedI64>, CliError> {
    let values = array_file::read(path)?;
    Ok(PartialSumTree::build(CheckedI64, &values)?)
}

fn save(path: &Path, tree: &PartialSumTree<CheckedI64>) -> Result<(), CliError> {
    array_file::write(path, &tree.to_vec()?)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let mut emit = |text: String| out.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string()));
    match command {
        Command::Build { input, output, cells } => {
            let tree = load(&input)?;
            save(&output, &tree)?;
            if cells {
                emit(tree.cells().iter().map(|c| format!("{c}\n")).collect())?;
            }
        }
        Command::Get { file, k } => emit(format!("{}\n", load(&file)?.get(index(k)?)?))?,
        Command::Suffix { file, k } => emit(format!("{}\n", load(&file)?.suffix_sum(index(k)?)?))?,
        Command::Sum { file, j, k } => {
            let tree = load(&file)?;
            let start = index(j)?;
            let end = k
                .checked_add(1)
                .and_then(|e| usize::try_from(e).ok())
                .filter(|&e| e >= start)
                .ok_or_else(|| CliError::Contract(format!("range {j}..={k} is invalid")))?;
            emit(format!("{}\n", tree.range_sum(start..end)?))?;
        }
        Command::Inc { file, k, d } => {
            let mut tree = load(&file)?;
            tree.inc(index(k)?, d)?;
            save(&file, &tree)?;
        }
        Command::Set { file, k, x } => {
            let mut tree = load(&file)?;
            tree.set(index(k)?, x)?;
            save(&file, &tree)?;
        }
        Command::Find { file, x } => emit(format!("{}\n", load(&file)?.find(x)?))?,
        Command::Sample { file, draws, seed } => {
            let values = array_file::read(&file)?;
            let mut sampler = WeightedSampler::new(&values, seed)?;
            let counts = sampler.histogram(draws)?;
            let mut text = format!("# rng={RNG_NAME} seed={seed} draws={draws}\n");
            text.extend(counts.iter().map(|c| format!("{c}\n")));
            emit(text)?;
        }
        Command::Bench { sizes, ops, seed, mix } => {
            let report = run_bench(&sizes, ops, mix, seed)?;
            emit(report.to_string())?;
            if report.mismatches() > 0 || !report.within_bounds() {
                return Err(CliError::Contract("bench found a mismatch or a bound violation".into()));
            }
        }
        Command::Selftest { max_m, cases, seed, ops } => {
            let report = run_differential(max_m, cases, ops, seed);
            emit(format!(
                "sequences={} operations={} queries={} result={}\n",
                report.sequences,
                report.operations,
                report.queries,
                if report.passed() { "ok" } else { "FAILED" }
            ))?;
            if let Some(mismatch) = report.first_mismatch {
                return Err(CliError::Contract(mismatch));
            }
        }
        Command::Trace { file, op, args } => {
            let mut tree = load(&file)?;
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(CliError::Input(format!("trace {op} takes {n} argument(s), got {}", args.len())))
                }
            };
            let text = match op.as_str() {
                "sumN" | "suffix" => {
                    arity(1)?;
                    let (sum, trace) = tree.suffix_sum_traced(index(args[0])?)?;
                    render(TraceKind::SuffixSum, &trace, Some(sum))
                }
                "get" => {
                    arity(1)?;
                    let (x, trace) = tree.get_traced(index(args[0])?)?;
                    render(TraceKind::Get, &trace, Some(x))
                }
                "inc" => {
                    arity(2)?;
                    // dry run: the file is not rewritten
                    let trace = tree.inc_traced(index(args[0])?, args[1])?;
                    render(TraceKind::Inc, &trace, None::<i64>)
                }
                "find" => {
                    arity(1)?;
                    let (k, trace) = tree.find_traced(args[0])?;
                    render(TraceKind::Find, &trace, Some(k))
                }
                other => return Err(CliError::Input(format!("unknown trace operation `{other}` (sumN, get, inc, find)"))),
            };
            emit(text)?;
        }
    }
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "psum: {}", e.message());
            e.exit_code()
        }
    }
}
