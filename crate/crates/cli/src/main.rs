use std::path::PathBuf;
use std::process;
use std::time::Instant;

use clap::{Parser, Subcommand};

use schwarz_cli::{describe, parse_tolerance, run_suite, write_report, CliError, ExitCode, Suite, SuiteConfig, Tolerances};

#[derive(Parser, Debug)]
#[command(name = "schwarz", version, about = "Run boundary Schwarz and rigidity verifier suites")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Suite to run (see --list-suites).
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON file with extra instances for the suite.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report file; defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Tolerance override, KEY=VALUE; repeatable.
    #[arg(long = "tolerance", value_name = "KEY=VALUE")]
    tolerances: Vec<String>,
    #[arg(long)]
    list_suites: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize a function spec or boundary measure file.
    Describe { path: PathBuf },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(Command::Describe { path }) = cli.command {
        print!("{}", describe(&path)?);
        return Ok(ExitCode::Pass);
    }
    if cli.list_suites {
        for s in Suite::ALL {
            let keys: Vec<String> = s.tolerance_defaults().iter().map(|(k, v)| format!("{k}={v:e}")).collect();
            println!("{:<20} {}  [{}]", s.name(), s.summary(), keys.join(", "));
        }
        return Ok(ExitCode::Pass);
    }
    let Some(name) = cli.suite else {
        return Err(CliError::MissingSuite);
    };
    let suite: Suite = name.parse()?;
    let overrides = cli
        .tolerances
        .iter()
        .map(|t| parse_tolerance(t))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = SuiteConfig {
        suite,
        seed: cli.seed,
        tolerances: Tolerances::with_overrides(suite, &overrides)?,
        input_path: cli.input,
        output_path: cli.output,
    };
    let start = Instant::now();
    let report = run_suite(&cfg)?;
    write_report(&report, cfg.output_path.as_deref())?;
    let failures = report.failures().count();
    eprintln!(
        "{}: {} reports, {} failing, wall time {:.2} s",
        suite,
        report.reports.len(),
        failures,
        start.elapsed().as_secs_f64()
    );
    Ok(report.exit_code())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::InputError as i32 } else { 0 };
            let _ = e.print();
            process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::InputError
        }
    };
    process::exit(code as i32);
}
