//! Command-line front end: generate, solve, verify, oracle and bench.
//!
//! Exit status is 0 when every result is within its bound, 1 on a bound
//! violation and 2 on usage, parse or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chorefair::bench::{run_suite, BenchConfig, Suite};
use chorefair::generate::{generate_instance, GenParams, GeneratorKind};
use chorefair::io::{self, AllocationFile};
use chorefair::model::{int, parse_rational, Cost};
use chorefair::oracle::{oracle_min_alpha, DEFAULT_BUDGET};
use chorefair::runner::{self, Algorithm, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};

#[derive(Parser)]
#[command(
    name = "chorefair",
    version,
    about = "Approximately envy-free chore allocation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random instance.
    Generate {
        #[arg(long, default_value = "uniform")]
        kind: GeneratorKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Small cost of bi-valued instances.
        #[arg(long, value_parser = rational, default_value = "1/2")]
        eps: Cost,
        /// Probability of the large cost in bi-valued instances.
        #[arg(long, value_parser = rational, default_value = "1/2")]
        p: Cost,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Solve an instance and report the exact α achieved.
    Solve {
        #[arg(long = "in", default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        algorithm: Algorithm,
        /// Allocation file to write; without it the allocation goes to
        /// stdout and the report to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an allocation against an instance at a given factor.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        alloc: PathBuf,
        #[arg(long, value_parser = rational, default_value = "1")]
        alpha: Cost,
    },
    /// Exhaustively find the best achievable α of a small instance.
    Oracle {
        #[arg(long = "in", default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite; CSV to stdout (or --out), table to stderr.
    Bench {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases (per agent count, for suites sweeping several).
        #[arg(long)]
        count: Option<usize>,
        /// Largest m of the exhaustive bi-valued sweep.
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> Result<Cost, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn run(command: Command) -> Result<i32, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match command {
        Command::Generate {
            kind,
            n,
            m,
            seed,
            eps,
            p,
            out,
        } => {
            let file =
                generate_instance(kind, n, m, seed, &GenParams { eps, p }).map_err(|e| err(&e))?;
            io::write_text(&out, &io::emit_instance(&file)).map_err(|e| err(&e))?;
            Ok(EXIT_OK)
        }
        Command::Solve {
            input,
            algorithm,
            out,
        } => {
            let file = io::load_instance(&input).map_err(|e| err(&e))?;
            let (alloc, report) = runner::solve_file(&file, algorithm).map_err(|e| err(&e))?;
            let text = io::emit_allocation(&AllocationFile::new(&alloc, file.instance.m()));
            match out {
                Some(path) => {
                    io::write_text(&path, &text).map_err(|e| err(&e))?;
                    print!("{}", report.render());
                }
                None => {
                    print!("{text}");
                    eprint!("{}", report.render());
                }
            }
            eprintln!("time: {:.3?}", report.wall_time);
            Ok(report.exit_code())
        }
        Command::Verify {
            input,
            alloc,
            alpha,
        } => {
            let report = runner::run_verify(&input, &alloc, &alpha).map_err(|e| err(&e))?;
            print!("{}", report.render());
            Ok(report.exit_code())
        }
        Command::Oracle { input, budget, out } => {
            let file = io::load_instance(&input).map_err(|e| err(&e))?;
            let result = oracle_min_alpha(&file.instance, budget).map_err(|e| err(&e))?;
            println!("alpha: {}", result.best_alpha);
            println!("states: {}", result.states_examined);
            println!("efx: {}", result.best_alpha.within(&int(1)));
            if let Some(path) = out {
                let text = io::emit_allocation(&AllocationFile::new(
                    &result.best_allocation,
                    file.instance.m(),
                ));
                io::write_text(&path, &text).map_err(|e| err(&e))?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench {
            suite,
            seed,
            count,
            max_m,
            budget,
            out,
        } => {
            let cfg = BenchConfig {
                seed,
                count,
                max_m,
                budget,
            };
            let report = run_suite(suite, &cfg);
            eprint!("{}", report.table());
            for (index, message) in report.failures.iter().take(20) {
                eprintln!("  case {index}: {message}");
            }
            match out {
                Some(path) => io::write_text(&path, &report.csv()).map_err(|e| err(&e))?,
                None => print!("{}", report.csv()),
            }
            Ok(if report.violations() == 0 {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
    }
}
