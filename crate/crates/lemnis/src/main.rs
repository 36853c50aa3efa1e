use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lemnis::commands::{self, VerifyOptions};
use lemnis::{CliResult, ModulusChoice, RunReport, TimeSpec};
use lemnis_core::invariants::CONSTANCY_TOLERANCE;

/// Choreographies on the lemniscate of Bernoulli: moduli, conserved
/// quantities, potential recovery and integration checks.
///
/// Exit status is 0 when every check in the report passes, 1 when a check
/// fails and 2 on errors.
#[derive(Parser)]
#[command(name = "lemnis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Target {
    /// Number of bodies.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// 1-based index into the moduli found for n, or a value of k^2.
    #[arg(long, default_value = "1")]
    modulus: ModulusChoice,
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Moduli for which the center of mass stays at the origin.
    FindModuli {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Conserved quantities with constancy diagnostics.
    Constants {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = CONSTANCY_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Least-squares recovery of the pair potential.
    Fit {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
    /// Newton certificate and forward integration.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        periods: usize,
        /// Local error bound per integration step.
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
        /// Certificate grid size.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Dump the sampled trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// SVG snapshots of the configuration; the report goes to stdout.
    Figure {
        #[command(flatten)]
        target: Target,
        /// Snapshot time: a number, or a multiple of K or tau (e.g. K/5).
        #[arg(long = "t", default_values = ["0", "K/5"])]
        times: Vec<TimeSpec>,
        /// SVG file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive scan of pair subsets for constant sums and products.
    Subsets {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = CONSTANCY_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
}

fn run(command: Command) -> CliResult<(RunReport, Option<PathBuf>)> {
    Ok(match command {
        Command::FindModuli { n, output } => (commands::find_moduli(n)?, output.out),
        Command::Constants { target, grid, tol, output } => {
            (commands::constants(target.n, target.modulus, grid, tol)?, output.out)
        }
        Command::Fit { target, output } => (commands::fit(target.n, target.modulus)?, output.out),
        Command::Verify { target, periods, tol, grid, csv, output } => {
            let opts = VerifyOptions { periods, tol, grid };
            (commands::verify(target.n, target.modulus, &opts, csv.as_deref())?, output.out)
        }
        Command::Figure { target, times, out } => (commands::figure(target.n, target.modulus, &times, &out)?, None),
        Command::Subsets { target, grid, tol, output } => {
            (commands::subsets(target.n, target.modulus, grid, tol)?, output.out)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli.command).and_then(|(report, out)| {
        let text = report.render();
        match out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(report.pass())
    });
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
