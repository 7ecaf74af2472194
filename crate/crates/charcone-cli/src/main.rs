//! Command-line entry point.
//!
//! Exit codes: 0 on a completed analysis (including NOT_HYPERBOLIC
//! verdicts), 1 when a verify-mode identity check exceeds its threshold,
//! 2 on configuration or I/O errors.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charcone_cli::runner::execute;
use charcone_cli::scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "charcone",
    version,
    about = "Characteristic-cone analysis of volume-form sigma models on surface targets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write report.json / points.csv (and ray.csv
    /// in ray mode).
    Analyze {
        /// Path to the scenario TOML file.
        config: PathBuf,
        /// Output directory (default: scenario `output.dir`, else the
        /// current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for sweeps; results do not depend on this.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            config,
            out,
            seed,
            threads,
        } => analyze(&config, out, seed, threads),
    }
}

fn analyze(config: &Path, out: Option<PathBuf>, seed: Option<u64>, threads: usize) -> ExitCode {
    let scenario = match Scenario::from_path(config) {
        Ok(s) => s,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let seed = seed.unwrap_or(scenario.analysis.seed);
    let out_dir = out
        .or_else(|| scenario.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let outcome = execute(&scenario, seed, threads);
    if let Err(err) = outcome.artifacts().write_to(&out_dir) {
        eprintln!("error: cannot write report artifacts: {err}");
        return ExitCode::from(2);
    }

    println!(
        "charcone {}: mode {}, seed {}",
        charcone_cli::report::TOOL_VERSION,
        outcome.report.mode,
        seed
    );
    if let Some(aggregate) = &outcome.report.aggregate {
        println!(
            "points {} (failed {}), singular G1 fraction {:.3}, verdict {}",
            aggregate.points,
            aggregate.failed_points,
            aggregate.singular_g1_fraction,
            aggregate.verdict
        );
    }
    if let Some(verify) = &outcome.report.verify {
        for check in &verify.identities {
            println!(
                "identity {:<24} max residual {:.3e} (threshold {:.1e}) {}",
                check.name,
                check.max_residual,
                check.threshold,
                if check.pass { "ok" } else { "FAIL" }
            );
        }
        println!(
            "verify: {} over {} samples",
            if verify.passed { "PASS" } else { "FAIL" },
            verify.samples
        );
    }
    if let Some(ray) = &outcome.report.ray {
        match &ray.projection_error {
            Some(err) => println!("ray: projection failed: {err}"),
            None => println!(
                "ray: branch {}, {} states, max drift {:.3e}, termination {}",
                ray.branch, ray.states, ray.max_drift, ray.termination
            ),
        }
    }
    println!("report written to {}", out_dir.display());

    ExitCode::from(outcome.exit_code as u8)
}
