use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use so1n_cli::commands;
use so1n_cli::config::{ConfigFile, OrbitConfig, PoissonEvalConfig, VerifyConfig};
use so1n_cli::{run_suite, CliError};
use so1n_core::Sign;

#[derive(Parser)]
#[command(name = "so1n", version, about = "Numerical checks for SO(n+1,1) harmonic analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a JSON report.
    Verify {
        #[arg(long, env = "SO1N_CONFIG")]
        config: PathBuf,
    },
    /// Iwasawa factors of a group matrix.
    Decompose {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, allow_hyphen_values = true, default_value = "-")]
        sign: SignArg,
    },
    /// Evaluate a Poisson transform on a grid (CSV).
    PoissonEval {
        #[arg(long, env = "SO1N_CONFIG")]
        config: PathBuf,
    },
    /// Sample a boundary orbit (CSV).
    BoundaryOrbit {
        #[arg(long, env = "SO1N_CONFIG")]
        config: PathBuf,
    },
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify { config } => {
            let cfg = VerifyConfig::from_file(&ConfigFile::load(&config)?)?;
            let report = run_suite(&cfg)?;
            match &cfg.output_path {
                Some(p) => report.write(p)?,
                None => println!("{}", report.to_json()),
            }
            for c in &report.checks {
                eprintln!("{:<5} {:<45} residual {:.3e} (tolerance {:.1e})", if c.pass { "pass" } else { "FAIL" }, c.id, c.residual, c.tolerance);
            }
            eprintln!("{}/{} checks passed", report.summary.passed, report.summary.total);
            Ok(report.all_passed())
        }
        Command::Decompose { matrix, sign } => {
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            print!("{}", commands::decompose(&matrix, sign)?);
            Ok(true)
        }
        Command::PoissonEval { config } => {
            let cfg = PoissonEvalConfig::from_file(&ConfigFile::load(&config)?)?;
            emit(&commands::poisson_eval(&cfg)?, cfg.output_path.as_deref())?;
            Ok(true)
        }
        Command::BoundaryOrbit { config } => {
            let cfg = OrbitConfig::from_file(&ConfigFile::load(&config)?)?;
            emit(&commands::boundary_orbit(&cfg)?, cfg.output_path.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
