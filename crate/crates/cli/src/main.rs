//! Command-line front end: figure reproduction, generic sweeps, and the
//! built-in selftest, all emitting deterministic CSV.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical failure,
//! 3 I/O error.

mod config;
mod csv;
mod figures;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_range, ConfigLayer, RunConfig};
use figures::{run_figure, run_sweep, FigureName, SweepSpec};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qdil",
    version,
    about = "Resource-conversion rates under noise: figures, sweeps, and a phase-flip code simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Default)]
struct CommonFlags {
    /// Phase-damping strength.
    #[arg(long)]
    lambda: Option<f64>,
    /// Amplitude-damping strength.
    #[arg(long)]
    gamma: Option<f64>,
    /// Temperature (k = 1 units).
    #[arg(long = "T")]
    temperature: Option<f64>,
    /// Noise mixing weight.
    #[arg(long)]
    p: Option<f64>,
    /// Dilution angle used by the error-correction comparison.
    #[arg(long)]
    alpha: Option<f64>,
    /// Alpha sweep range as LO:HI.
    #[arg(long = "alpha-range", value_parser = parse_range_arg)]
    alpha_range: Option<(f64, f64)>,
    /// q sweep range as LO:HI.
    #[arg(long = "q-range", value_parser = parse_range_arg)]
    q_range: Option<(f64, f64)>,
    /// Grid points per sweep.
    #[arg(long)]
    grid: Option<usize>,
    /// Seed for randomized searches.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key=value config file (flags take precedence).
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_range_arg(text: &str) -> Result<(f64, f64), String> {
    parse_range(text).map_err(|e| e.message().to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce a figure's data as CSV.
    Figure {
        /// One of fig2|fig3|fig4|fig5|figS2|figS3|figQEC.
        name: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Sweep a named rate family over an explicit range.
    Sweep {
        /// One of entanglement|coherence-pure|coherence-mixed|thermal|purity.
        spec: String,
        /// Sweep range as LO:HI.
        #[arg(long, value_parser = parse_range_arg)]
        range: (f64, f64),
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run the built-in invariant suites and print a per-module report.
    Selftest {
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Test hook: corrupt the named check's tolerance (module.check).
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

impl CommonFlags {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            lambda: self.lambda,
            gamma: self.gamma,
            temperature: self.temperature,
            p: self.p,
            alpha: self.alpha,
            alpha_range: self.alpha_range,
            q_range: self.q_range,
            grid: self.grid,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Figure { name, flags } => {
            let figure = FigureName::parse(&name)?;
            let config = RunConfig::resolve(flags.config.as_deref(), &flags.layer())?;
            let (doc, out) = run_figure(figure, &config)?;
            doc.write_to(&out)?;
            println!("wrote {} ({} rows)", out.display(), doc.row_count());
            Ok(())
        }
        Command::Sweep { spec, range, flags } => {
            let spec = SweepSpec::parse(&spec)?;
            let config = RunConfig::resolve(flags.config.as_deref(), &flags.layer())?;
            let (doc, out) = run_sweep(spec, range, &config)?;
            doc.write_to(&out)?;
            println!("wrote {} ({} rows)", out.display(), doc.row_count());
            Ok(())
        }
        Command::Selftest { seed, inject_fault } => {
            let report = selftest::run_selftest(seed, inject_fault.as_deref());
            print!("{}", report.render());
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::Numerical("selftest failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
