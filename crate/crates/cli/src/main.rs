use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unramified_core::experiments::Region;

mod commands;

/// Exact and Monte Carlo statistics for roots of random p-adic polynomials
/// in unramified extensions.
#[derive(Parser, Debug)]
#[command(name = "unramified", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print D_n(u, v) and D*_n(t).
    Dfunc {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=commands::MAX_DFUNC_N))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact probabilities rho, alpha and beta.
    Probs {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=commands::MAX_DFUNC_N))]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the exhaustive identity checks over a range of n.
    Verify {
        #[arg(long, value_enum, default_value_t = Scope::All)]
        scope: Scope,
        /// First n of the range.
        #[arg(long, default_value_t = 1)]
        from: u64,
        /// Last n of the range, inclusive.
        #[arg(long, default_value_t = 12)]
        to: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Monte Carlo root expectations against their exact values.
    Simulate {
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Model::Haar)]
        model: Model,
    },
    /// Monte Carlo integrals of phi over O_K or its maximal ideal.
    Integrate {
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = RegionArg::Both)]
        region: RegionArg,
    },
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    seed: u64,
    #[arg(long, default_value_t = unramified_core::padic::DEFAULT_PRECISION)]
    precision: u32,
    /// File the reports are written to.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for report files when --out is not given.
    #[arg(long, env = "UNRAMIFIED_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Scope {
    Incidence,
    Dseries,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Model {
    Haar,
    Monic,
    #[value(alias = "monic_xn")]
    MonicXn,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RegionArg {
    #[value(name = "OK", alias = "ok")]
    Ok,
    #[value(name = "MK", alias = "mk")]
    Mk,
    Both,
}

impl RegionArg {
    fn regions(self) -> &'static [Region] {
        match self {
            RegionArg::Ok => &[Region::Integers],
            RegionArg::Mk => &[Region::MaximalIdeal],
            RegionArg::Both => &[Region::Integers, Region::MaximalIdeal],
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
