//! Scenario-driven command line for AC drive simulation and observability
//! analysis.
//!
//! Exit codes: 0 success, 1 internal/verification failure, 2 configuration
//! error, 3 trajectory divergence, 4 singular fraction above the strict
//! threshold (with `--strict`).

use acdrive_cli::{config, csvio};

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use acdrive::obsv::analyze_trajectory;
use acdrive::sim::integrate;
use acdrive::verify::{run_verify, VerifyConfig};
use acdrive::Error;

#[derive(Parser)]
#[command(name = "acdrive", version, about = "AC drive simulation and local observability analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write the trajectory CSV.
    Simulate {
        /// Scenario file path.
        scenario: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate, analyze observability per sample, write the report CSV and
    /// print a summary.
    Analyze {
        /// Scenario file path.
        scenario: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Fail (exit 4) when the singular fraction exceeds the scenario's
        /// strict threshold.
        #[arg(long)]
        strict: bool,
    },
    /// Run the randomized verification suite (oracle equivalence,
    /// determinant consistency, specialization identities, numerics).
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of random states per property.
        #[arg(long, default_value_t = 1000)]
        states: usize,
        /// Deliberately tamper with the determinant formula; the suite must
        /// then report at least one failure.
        #[arg(long)]
        mutate: bool,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_DIVERGED: u8 = 3;
const EXIT_STRICT: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate { scenario, out } => cmd_simulate(&scenario, &out),
        Command::Analyze { scenario, out, strict } => cmd_analyze(&scenario, &out, strict),
        Command::Verify { seed, states, mutate } => cmd_verify(seed, states, mutate),
    };
    ExitCode::from(code)
}

fn map_model_error(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) | Error::Mismatch(_) => EXIT_CONFIG,
        Error::Divergence { .. } => EXIT_DIVERGED,
        _ => EXIT_FAIL,
    }
}

fn cmd_simulate(scenario_path: &Path, out: &Path) -> u8 {
    let scenario = match config::load_scenario(scenario_path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let traj = match integrate(&scenario) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return map_model_error(&e);
        }
    };
    if let Err(e) = csvio::write_trajectory(&traj, out) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return EXIT_FAIL;
    }
    println!("wrote {} samples to {}", traj.len(), out.display());
    0
}

fn cmd_analyze(scenario_path: &Path, out: &Path, strict: bool) -> u8 {
    let scenario = match config::load_scenario(scenario_path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let traj = match integrate(&scenario) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return map_model_error(&e);
        }
    };
    let report = match analyze_trajectory(&traj, &scenario) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return map_model_error(&e);
        }
    };
    if let Err(e) = csvio::write_report(&report, &traj, out) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return EXIT_FAIL;
    }

    let s = &report.summary;
    println!("samples:              {}", report.samples.len());
    println!("observable fraction:  {:.4}", s.observable_fraction);
    println!("min sigma_min/sigma_max: {:.3e}", s.min_sigma_ratio);
    println!("min |delta_closed|:   {:.3e}", s.min_abs_delta);
    println!("max |delta_closed|:   {:.3e}", s.max_abs_delta);
    if s.singular_intervals.is_empty() {
        println!("singular intervals:   none");
    } else {
        for (a, b) in &s.singular_intervals {
            println!("singular interval:    [{a:.6}, {b:.6}] s");
        }
    }
    println!("report written to {}", out.display());

    let singular_fraction = 1.0 - s.observable_fraction;
    if strict && singular_fraction > scenario.analysis.strict_fraction {
        eprintln!(
            "strict mode: singular fraction {singular_fraction:.4} exceeds threshold {}",
            scenario.analysis.strict_fraction
        );
        return EXIT_STRICT;
    }
    0
}

fn cmd_verify(seed: u64, states: usize, mutate: bool) -> u8 {
    if states == 0 {
        eprintln!("error: --states must be >= 1");
        return EXIT_CONFIG;
    }
    let started = Instant::now();
    let results = run_verify(&VerifyConfig { seed, n_states: states, mutate });
    let mut failures = 0usize;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let detail = if r.detail.is_empty() {
            String::new()
        } else {
            format!(" — {}", r.detail)
        };
        println!(
            "{status} {name:<40} worst {worst:>10.3e}  bound {bound:>8.1e}{detail}",
            name = r.name,
            worst = r.worst,
            bound = r.bound,
        );
        if !r.passed {
            failures += 1;
        }
    }
    println!(
        "{} properties, {} failed, {:.2} s (seed {seed}, {states} states{})",
        results.len(),
        failures,
        started.elapsed().as_secs_f64(),
        if mutate { ", mutated" } else { "" },
    );
    if failures > 0 {
        EXIT_FAIL
    } else {
        0
    }
}
