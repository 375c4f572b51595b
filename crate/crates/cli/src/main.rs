use std::path::PathBuf;
use std::process::ExitCode;

use casimir_cli::{pool, resolve_spec, run_sweep, CliError, Overrides, Preset, WORKERS_ENV};
use casimir_core::validation;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Thermal Casimir sweeps in the plane-sphere geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep over the grid given by a config file
    Sweep(RunArgs),
    /// Perfect reflector θ and θ_PFA at 300 K
    Fig1(RunArgs),
    /// Drude (gold) θ and θ_PFA at 300 K
    Fig2(RunArgs),
    /// Plasma/Drude force ratio at 300 K
    Fig3(RunArgs),
    /// Run the acceptance criteria and print a pass/fail table
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key = value config file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Fixed multipole cutoff
    #[arg(long)]
    lmax: Option<usize>,
    /// Worker threads (default: available parallelism)
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Criterion numbers to run (default: all)
    criteria: Vec<u8>,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

fn sweep(preset: Preset, args: RunArgs) -> Result<ExitCode, CliError> {
    let overrides = Overrides {
        config: args.config,
        out: args.out,
        tol: args.tol,
        l_max: args.lmax,
    };
    let spec = resolve_spec(preset, &overrides)?;
    let workers = pool(args.workers)?;
    println!(
        "{}: {} points on {} worker(s), config {}",
        preset.name(),
        spec.points(),
        workers.current_num_threads(),
        &spec.config_hash()[..12]
    );
    let outcome = run_sweep(&spec, preset.name(), &workers)?;
    println!(
        "{}: {} failed of {}, wrote {}",
        preset.name(),
        outcome.failed,
        outcome.points,
        outcome.path.display()
    );
    Ok(if outcome.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn validate(args: ValidateArgs) -> Result<ExitCode, CliError> {
    let workers = pool(args.workers)?;
    let mut failed = 0;
    for (id, run) in validation::CRITERIA {
        if !args.criteria.is_empty() && !args.criteria.contains(&id) {
            continue;
        }
        let report = workers.install(run);
        println!("{report}");
        if !report.passed() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("validate: {failed} criterion(s) failed");
        return Ok(ExitCode::FAILURE);
    }
    println!("validate: all criteria passed");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(Preset::Sweep, a),
        Command::Fig1(a) => sweep(Preset::Fig1, a),
        Command::Fig2(a) => sweep(Preset::Fig2, a),
        Command::Fig3(a) => sweep(Preset::Fig3, a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
