use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::{check_trace, gen_terms, run_comparison, run_strategy, with_big_stack, write_csv, write_json, Strategy, Workload};
use crate::baselines::{print_db_value, whnf_closures};
use crate::env::Backend;
use crate::eval::{whnf, EvalConfig, EvalError};
use crate::named::{parse_surface, print_surface, NamedTerm};
use crate::ordered::{parse_closed, print_ordered, print_value, read_ordered, write_ordered};
use crate::{DEFAULT_FUEL, FUEL_ENV_VAR};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_FUEL: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_NOT_ORDERED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ordlam", version, about = "Ordered lambda terms: evaluate, convert, check and benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a term to weak head normal form or full normal form.
    Eval {
        /// Input file in surface syntax, or `-` for stdin.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Ordered)]
        strategy: StrategyArg,
        /// Substitution-list backend for the `ordered` strategy.
        #[arg(long, default_value_t = Backend::List)]
        env: Backend,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long, value_enum, default_value_t = PrintMode::Whnf)]
        print: PrintMode,
    },
    /// Convert between surface syntax and ordered s-expressions.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Direction,
    },
    /// Run the small-step machine, checking every step against β-reduction.
    Check {
        file: PathBuf,
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long, default_value_t = Backend::List)]
        env: Backend,
    },
    /// Benchmark strategies on a workload and emit CSV or JSON records.
    Bench {
        #[arg(long)]
        workload: Workload,
        /// One or more sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        size: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "ordered-list,ordered-tree,closures,beta-normal")]
        strategies: Vec<Strategy>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long)]
        fuel: Option<u64>,
        /// Output path ending in `.csv` or `.json`; CSV on stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write generated terms, one file each, in surface syntax.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = 0.5)]
        typed_bias: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    /// Ordered terms, backend chosen by `--env`.
    Ordered,
    OrderedList,
    OrderedTree,
    Closures,
    BetaNormal,
}

impl StrategyArg {
    fn resolve(self, env: Backend) -> Strategy {
        match (self, env) {
            (StrategyArg::Ordered, Backend::List) | (StrategyArg::OrderedList, _) => Strategy::OrderedList,
            (StrategyArg::Ordered, Backend::Tree) | (StrategyArg::OrderedTree, _) => Strategy::OrderedTree,
            (StrategyArg::Closures, _) => Strategy::Closures,
            (StrategyArg::BetaNormal, _) => Strategy::BetaNormal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PrintMode {
    Whnf,
    Nf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Ordered,
    Named,
}

/// Command failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::FuelExhausted { .. } => Failure::new(EXIT_FUEL, e.to_string()),
            EvalError::Invariant(_) => Failure::new(EXIT_INTERNAL, e.to_string()),
        }
    }
}

/// Entry point of the `ordlam` binary: parses `args`, runs the command on a
/// large stack, writes its output and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let fuel_default = match default_fuel() {
        Ok(f) => f,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_PARSE;
        }
    };
    let outcome = with_big_stack(move || {
        let mut out = Vec::new();
        let result = dispatch(cli.command, fuel_default, &mut out);
        (out, result)
    });
    match outcome {
        Ok((out, result)) => {
            let _ = stdout.write_all(&out);
            match result {
                Ok(code) => code,
                Err(f) => {
                    let _ = writeln!(stderr, "error: {}", f.message);
                    f.code
                }
            }
        }
        Err(panic) => {
            let _ = writeln!(stderr, "internal error: {panic}");
            EXIT_INTERNAL
        }
    }
}

fn default_fuel() -> Result<u64, String> {
    match std::env::var(FUEL_ENV_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| format!("{FUEL_ENV_VAR} must be a non-negative integer, got `{s}`")),
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|s| text = s)
    };
    read.map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn read_term(path: &Path) -> Result<NamedTerm, Failure> {
    let text = read_input(path)?;
    parse_surface(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(EXIT_INTERNAL, e.to_string())
}

fn dispatch(command: Command, fuel_default: u64, out: &mut Vec<u8>) -> Result<i32, Failure> {
    match command {
        Command::Eval { file, strategy, env, fuel, print } => {
            let m = read_term(&file)?;
            let fuel = fuel.unwrap_or(fuel_default);
            let text = eval_text(&m, strategy.resolve(env), fuel, print)?;
            writeln!(out, "{text}").map_err(io_failure)?;
            Ok(0)
        }
        Command::Convert { file, to } => {
            let text = read_input(&file)?;
            let converted = match to {
                Direction::Ordered => {
                    let m = parse_surface(&text).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
                    write_ordered(&parse_closed(&m))
                }
                Direction::Named => {
                    let t = read_ordered(&text).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
                    if !t.is_ordered() {
                        return Err(Failure::new(EXIT_NOT_ORDERED, "input is not an ordered term"));
                    }
                    if t.fv_count() != 0 {
                        return Err(Failure::new(EXIT_NOT_ORDERED, "input has unbound dots"));
                    }
                    print_surface(&print_ordered(&t, &[]))
                }
            };
            writeln!(out, "{converted}").map_err(io_failure)?;
            Ok(0)
        }
        Command::Check { file, fuel, env } => {
            let m = read_term(&file)?;
            let report = check_trace(&m, fuel.unwrap_or(fuel_default), env);
            writeln!(out, "{report}").map_err(io_failure)?;
            Ok(if report.invariant_breach.is_some() || !report.passed() {
                EXIT_INTERNAL
            } else if report.fuel_exhausted {
                EXIT_FUEL
            } else {
                0
            })
        }
        Command::Bench { workload, size, strategies, reps, fuel, out: path } => {
            let records = run_comparison(workload, &size, &strategies, fuel.unwrap_or(fuel_default), reps)
                .map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?;
            let written = match &path {
                Some(p) if p.extension().is_some_and(|e| e == "json") => {
                    std::fs::File::create(p).map_err(io_failure).and_then(|f| {
                        write_json(&records, std::io::BufWriter::new(f)).map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))
                    })
                }
                Some(p) => std::fs::File::create(p).map_err(io_failure).and_then(|f| {
                    write_csv(&records, std::io::BufWriter::new(f)).map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))
                }),
                None => write_csv(&records, &mut *out).map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string())),
            };
            written?;
            Ok(0)
        }
        Command::Gen { seed, count, max_size, typed_bias, out: dir } => {
            std::fs::create_dir_all(&dir).map_err(io_failure)?;
            let terms = gen_terms(seed, count, max_size, typed_bias);
            for (i, m) in terms.iter().enumerate() {
                let path = dir.join(format!("term_{i:05}.lam"));
                std::fs::write(&path, format!("{}\n", print_surface(m))).map_err(io_failure)?;
            }
            writeln!(out, "wrote {} terms to {}", terms.len(), dir.display()).map_err(io_failure)?;
            Ok(0)
        }
    }
}

// Beta-normal has no weak head stage, so it prints its normal form in both
// modes.
fn eval_text(m: &NamedTerm, strategy: Strategy, fuel: u64, print: PrintMode) -> Result<String, Failure> {
    let printed = match (print, strategy) {
        (PrintMode::Nf, _) | (PrintMode::Whnf, Strategy::BetaNormal) => run_strategy(m, strategy, fuel)?.normal_form,
        (PrintMode::Whnf, Strategy::Closures) => print_db_value(&whnf_closures(m, EvalConfig::new(Backend::List, fuel))?),
        (PrintMode::Whnf, _) => {
            let backend = strategy.backend().expect("ordered strategy");
            print_value(&whnf(m, EvalConfig::new(backend, fuel))?)
        }
    };
    Ok(print_surface(&printed))
}
