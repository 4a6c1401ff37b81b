use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinchaos::cli;

#[derive(Parser)]
#[command(version, about = "Chaos and entanglement sweeps over disordered spin-1/2 ensembles")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Output directory; overrides `[output] directory`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `[ensemble] base_seed`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Write every task's eigenvalues as CSV into this directory.
        #[arg(long, value_name = "DIR")]
        dump_eigenvalues: Option<PathBuf>,
    },
    /// Run a built-in figure preset.
    Preset {
        /// One of the preset names; see `--list`.
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        /// Use the full realization counts instead of desk-scale ones.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Print the preset as a config file instead of running it.
        #[arg(long)]
        print: bool,
        /// List preset names.
        #[arg(long)]
        list: bool,
    },
    /// Check a config and report every problem found.
    Validate { config: PathBuf },
}

fn execute(
    mut config: cli::ExperimentConfig,
    out: Option<PathBuf>,
    seed: Option<u64>,
    workers: Option<usize>,
    dump: Option<PathBuf>,
) -> spinchaos::Result<()> {
    if let Some(seed) = seed {
        config.ensemble.base_seed = seed;
    }
    if workers.is_some() {
        config.ensemble.workers = workers;
    }
    let out = out.unwrap_or_else(|| PathBuf::from(&config.output.directory));
    let (table, written) = cli::run_experiment(&config, &out, dump.as_deref())?;
    for r in &table.records {
        eprintln!("{:<16} J = {:<10.4} {:.6} ± {:.6}", r.measure, r.coupling, r.value, r.stderr);
    }
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.command {
        Command::Run {
            config,
            out,
            seed,
            workers,
            dump_eigenvalues,
        } => cli::load_config(&config).and_then(|c| execute(c, out, seed, workers, dump_eigenvalues)),
        Command::Preset {
            name,
            full,
            seed,
            out,
            workers,
            print,
            list,
        } => {
            if list {
                for name in cli::PRESET_NAMES {
                    println!("{name}");
                }
                Ok(())
            } else {
                let name = name.unwrap_or_default();
                cli::preset(&name, full).and_then(|mut c| {
                    if print {
                        if let Some(seed) = seed {
                            c.ensemble.base_seed = seed;
                        }
                        c.to_toml().map(|t| print!("{t}"))
                    } else {
                        execute(c, out, seed, workers, None)
                    }
                })
            }
        }
        Command::Validate { config } => cli::load_config(&config).map(|c| {
            let plans = c.plans();
            println!("ok: {} sweep(s), {} grid point(s), {} realization(s) each", plans.len(), c.sweep.grid().len(), c.realizations());
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
