use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use scrutiny::io::{
    example_report, partition_table, polarize_report, sets_sweep, simulate, verify, write_rows, wtp_sweep,
    ConfigError, Format, IoError, RunConfig,
};
use scrutiny::oracle::PatternId;
use scrutiny::DEFAULT_TOLERANCE;

const EXIT_VALIDATION: u8 = 1;
const EXIT_VIOLATIONS: u8 = 2;

/// Costly scrutiny of two-component binary signals: willingness to pay,
/// acquisition sets, belief patterns and their verification.
#[derive(Debug, Parser)]
#[command(name = "scrutiny", version)]
struct Cli {
    /// Flat `key = value` configuration file (defaults: the built-in example).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one configuration key, e.g. `--set cost=0.25` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Seed for Monte Carlo draws (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Table format; `example` and `verify` print a narrative unless given.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute tolerance for strict comparisons between beliefs.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Willingness to pay for the second component over a grid of priors.
    Wtp,
    /// Endpoints of the eight prior cases.
    Partition,
    /// B/V set membership for every pair of grid priors and every cost.
    Sets,
    /// Replay the two-person introductory example and check reference values.
    Example,
    /// Outcome of every signal for the configured pair of priors.
    Polarize,
    /// Monte Carlo pattern frequencies against their exact probabilities.
    Simulate {
        /// pb, cb, db, ur, or, or all.
        #[arg(long, default_value = "all")]
        pattern: String,
        #[arg(long)]
        draws: Option<u64>,
    },
    /// Grid checks of every characterization plus Monte Carlo consistency.
    Verify {
        #[arg(long)]
        draws: Option<u64>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, IoError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError { line: None, message: format!("cannot read {}: {e}", path.display()) })?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    for assignment in &cli.overrides {
        cfg.apply_override(assignment)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match &cli.command {
        Command::Simulate { draws: Some(d), .. } | Command::Verify { draws: Some(d) } => cfg.draws = *d,
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output(cli: &Cli) -> Result<Box<dyn Write>, IoError> {
    Ok(match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_patterns(spec: &str) -> Result<Vec<PatternId>, IoError> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(PatternId::ALL.to_vec());
    }
    spec.split(',').map(|s| Ok(s.trim().parse::<PatternId>()?)).collect()
}

/// Runs the command; `Ok(false)` means the run completed but found violations.
fn run(cli: &Cli) -> Result<bool, IoError> {
    if !(cli.tolerance >= 0.0 && cli.tolerance.is_finite()) {
        return Err(IoError::Usage(format!("--tolerance must be a finite non-negative number, got {}", cli.tolerance)));
    }
    let cfg = load_config(cli)?;
    let table = cli.format.unwrap_or_default();
    let tol = cli.tolerance;
    let mut out = output(cli)?;
    let ok = match &cli.command {
        Command::Wtp => write_rows(&wtp_sweep(&cfg)?, table, &mut out).map(|_| true)?,
        Command::Partition => write_rows(&partition_table(&cfg)?, table, &mut out).map(|_| true)?,
        Command::Sets => write_rows(&sets_sweep(&cfg)?, table, &mut out).map(|_| true)?,
        Command::Polarize => write_rows(&polarize_report(&cfg)?, table, &mut out).map(|_| true)?,
        Command::Simulate { pattern, .. } => {
            let rows = simulate(&cfg, &parse_patterns(pattern)?)?;
            write_rows(&rows, table, &mut out)?;
            true
        }
        Command::Example => {
            let report = example_report(&cfg, tol)?;
            match cli.format {
                Some(f) => write_rows(&report.rows, f, &mut out)?,
                None => out.write_all(report.narrative().as_bytes())?,
            }
            report.passed()
        }
        Command::Verify { .. } => {
            let report = verify(&cfg, tol)?;
            match cli.format {
                Some(f) => write_rows(&report.rows(), f, &mut out)?,
                None => out.write_all(report.narrative().as_bytes())?,
            }
            report.passed()
        }
    };
    out.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATIONS),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
