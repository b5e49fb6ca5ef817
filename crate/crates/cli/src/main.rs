use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use envelope_cli::commands::{self, Output};
use envelope_cli::{CliError, Format, Scenario};

/// Two-envelope game laboratory.
#[derive(Parser)]
#[command(name = "envelope", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormatArgs {
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV with exact rationals.
    #[arg(long)]
    csv: bool,
}

impl FormatArgs {
    fn format(&self) -> Format {
        match (self.json, self.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Table,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact E[Y], E[X], E[V] and the correction for one strategy.
    Exact {
        scenario: PathBuf,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Monte Carlo estimate of E[V] with a 95% interval.
    Simulate {
        scenario: PathBuf,
        /// Worker threads; does not change the reported numbers.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Rank a list of strategies by exact E[V].
    Compare {
        scenario: PathBuf,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Posterior over the picked envelope given an observed amount.
    Posterior {
        prior: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Naive versus corrected value of switching after seeing x.
    Paradox {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long = "mean-y", allow_hyphen_values = true)]
        mean_y: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Average the observed amount over parallel copies of one game.
    Clones {
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        format: FormatArgs,
    },
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Exact { scenario, format } => commands::exact(&Scenario::load(&scenario)?, format.format()),
        Command::Simulate { scenario, workers, format } => {
            if workers == 0 {
                return Err(CliError::Validation("--workers must be at least 1".into()));
            }
            commands::simulate(&Scenario::load(&scenario)?, workers, format.format())
        }
        Command::Compare { scenario, format } => commands::compare(&Scenario::load(&scenario)?, format.format()),
        Command::Posterior { prior, x, format } => commands::posterior_cmd(&prior, &x, format.format()),
        Command::Paradox { x, mean_y, p, format } => commands::paradox(&x, &mean_y, &p, format.format()),
        Command::Clones { y, n, seed, format } => commands::clones(&y, n, seed, format.format()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("{w}");
            }
            print!("{}", out.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
