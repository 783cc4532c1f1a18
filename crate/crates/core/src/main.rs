use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use lattice_vqe::experiment::{
    append_solve_csv, bench_csv, bench_solver, load_records, parse_noise, report, run_batch,
    solve_only, ConfigFile, ExpectedOverride, Overrides, ReferenceValues,
};
use lattice_vqe::sim::NoiseModel;

/// Target-guided VQE experiments on lattice models.
///
/// Config files are TOML with one [[experiments]] table per run. Omitted
/// fields take these defaults: ansatz reps=2, entanglement=linear;
/// optimizer max_iter=100; guidance threshold_pct=1.0, initial_weight=1.6,
/// bias_step=0.25, delta_trigger=10, weight_floor=1.0, max_recursions=5,
/// recursion_base_step=0.3, reference_weight=1.0,
/// warm_start=initial_point; estimator mode=exact; lattice weight=1.0;
/// seed=0; output="results"; unguided_on_solver_failure=true.
#[derive(Parser)]
#[command(version, verbatim_doc_comment)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a config; writes <output>/<name>.json and
    /// <name>.trace.csv.
    Run {
        config: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Solve each experiment's model classically at its reference weight and
    /// append to <output>/solver_bench.csv.
    Solve {
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Summarize the records in a directory.
    Report {
        dir: PathBuf,
        /// TOML file with an [energies] table keyed by experiment name.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Time the iterative solver on Heisenberg rings and print a CSV.
    BenchSolver {
        #[arg(long)]
        max_qubits: usize,
        #[arg(long, default_value_t = 8)]
        min_qubits: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunFlags {
    #[arg(long)]
    seed: Option<u64>,
    /// Switch to shot sampling with this many shots per term.
    #[arg(long)]
    shots: Option<usize>,
    /// Noise for shot sampling, e.g. readout=0.02,cx=0.01.
    #[arg(long, value_parser = parse_noise)]
    noise: Option<NoiseModel>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    maxiter: Option<usize>,
    /// Target energy: a number, "classical" or "none".
    #[arg(long)]
    expected: Option<ExpectedOverride>,
    #[arg(long)]
    output: Option<PathBuf>,
}

impl From<RunFlags> for Overrides {
    fn from(f: RunFlags) -> Self {
        Overrides {
            seed: f.seed,
            shots: f.shots,
            noise: f.noise,
            reps: f.reps,
            max_iter: f.maxiter,
            expected: f.expected,
            output: f.output,
        }
    }
}

fn run(config: PathBuf, overrides: Overrides, jobs: usize) -> Result<bool> {
    let mut cfg = ConfigFile::load(&config)?;
    for spec in &mut cfg.experiments {
        overrides.apply(spec);
    }
    let mut ok = true;
    for (spec, out) in cfg
        .experiments
        .iter()
        .zip(run_batch(&cfg.experiments, jobs))
    {
        match out {
            Ok(out) => {
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
                let r = &out.record;
                let err = r
                    .relative_error_pct
                    .map_or("-".to_string(), |e| format!("{e:.5}%"));
                println!(
                    "{}: energy {:.8}, error {err}, {} evals, {} recursions, {:.2}s -> {}",
                    spec.name,
                    r.computed_energy,
                    r.evaluations,
                    r.recursions_used,
                    r.wall_seconds,
                    spec.record_path().display()
                );
            }
            Err(e) => {
                eprintln!("error: {}: {e}", spec.name);
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn solve(config: PathBuf, output: Option<PathBuf>) -> Result<bool> {
    let mut cfg = ConfigFile::load(&config)?;
    let mut ok = true;
    for spec in &mut cfg.experiments {
        if let Some(out) = &output {
            spec.output = out.clone();
        }
        match solve_only(spec) {
            Ok(s) => {
                if !s.converged {
                    eprintln!("warning: {}: solver did not converge", spec.name);
                }
                println!(
                    "{}: {} qubits, energy {:.8}, residual {:.2e}, {:.3}s",
                    spec.name, s.num_qubits, s.energy, s.residual, s.wall_seconds
                );
                std::fs::create_dir_all(&spec.output)
                    .with_context(|| spec.output.display().to_string())?;
                append_solve_csv(&spec.output.join("solver_bench.csv"), &spec.name, &s)?;
            }
            Err(e) => {
                eprintln!("error: {}: {e}", spec.name);
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            flags,
            jobs,
        } => run(config, flags.into(), jobs),
        Command::Solve { config, output } => solve(config, output),
        Command::Report { dir, reference } => (|| {
            let refs = reference.map(|p| ReferenceValues::load(&p)).transpose()?;
            print!("{}", report(&load_records(&dir)?, refs.as_ref()));
            Ok(true)
        })(),
        Command::BenchSolver {
            max_qubits,
            min_qubits,
            step,
            output,
        } => (|| {
            let csv = bench_csv(&bench_solver(min_qubits, max_qubits, step)?);
            match output {
                Some(p) => std::fs::write(&p, csv).with_context(|| p.display().to_string())?,
                None => print!("{csv}"),
            }
            Ok(true)
        })(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
