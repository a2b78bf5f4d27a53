use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dqpt_cli::commands::check_passed;
use dqpt_cli::{load_config, run_command, write_table, CliError, Command, Format, Overrides};

#[derive(Parser)]
#[command(name = "dqpt", version, about = "Quench dynamics of two-band lattice models")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Per-mode overlap g and final band energy
    Modes(Common),
    /// Eigenbasis entanglement spectrum and entropy over the zone
    EntropySweep(Common),
    /// Loschmidt rate function over the time window
    Rate(Common),
    /// Fisher zeros of every mode with |g| < 1
    FisherZeros(Common),
    /// Critical momenta (chains) or contours (planar models)
    CriticalK(Common),
    /// Sublattice occupation and entropy of a single mode
    Sublattice(Common),
    /// Oracle and invariant suite; exits 0 when every check passes
    Check(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    tmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tmax: Option<f64>,
    #[arg(long)]
    tsamples: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Ndjson,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Ndjson => Format::Ndjson,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("DQPT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::config("DQPT_THREADS", format!("not a thread count: {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config("DQPT_THREADS", e))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (cmd, args) = match cli.command {
        Sub::Modes(a) => (Command::Modes, a),
        Sub::EntropySweep(a) => (Command::EntropySweep, a),
        Sub::Rate(a) => (Command::Rate, a),
        Sub::FisherZeros(a) => (Command::FisherZeros, a),
        Sub::CriticalK(a) => (Command::CriticalK, a),
        Sub::Sublattice(a) => (Command::Sublattice, a),
        Sub::Check(a) => (Command::Check, a),
    };
    let overrides = Overrides {
        out: args.out,
        format: args.format.map(Format::from),
        grid: args.grid,
        t_min: args.tmin,
        t_max: args.tmax,
        t_samples: args.tsamples,
        k: args.k,
    };
    let cfg = load_config(&args.config, &overrides)?;
    let table = run_command(cmd, &cfg)?;
    let format = cfg
        .format
        .or_else(|| cfg.out_path.as_deref().map(Format::from_path))
        .unwrap_or(Format::Csv);
    write_table(&table, format, cfg.out_path.as_deref())?;
    Ok(cmd != Command::Check || check_passed(&table))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", CliError::config("<args>", e.kind()).record());
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!(
                "{}",
                CliError::CheckFailed("one or more checks failed".into()).record()
            );
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
