//! Command-line front end. All logic lives in the library; this file only
//! parses arguments, applies overrides, and maps outcomes to exit codes.
//!
//! Exit codes: 0 success; simulate uses 1 for config errors, 2 for
//! inadmissible initial states, 3 for a blowup (artifacts are still
//! written); verify exits with the number of failed suites; 64 is a usage
//! error (bad flags, unknown suite).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use sphereflock::SimulateError;
use sphereflock_cli::config::RunConfig;
use sphereflock_cli::runner::{self, RunError};
use sphereflock_cli::sweep::{self, SweepConfig};
use sphereflock_cli::{csvio, plot, verify};

#[derive(Parser)]
#[command(name = "sphereflock", version, about = "Flocking on the unit sphere: simulate, certify, sweep")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate one configuration and write its artifacts
    Simulate {
        /// JSON run configuration; a built-in default is used when omitted
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (overrides the config's output_dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// RNG seed override; also clears any seed embedded in the scenario
        #[arg(long)]
        seed: Option<u64>,
        /// Step size override
        #[arg(long)]
        dt: Option<f64>,
        /// Final time override
        #[arg(long)]
        t_end: Option<f64>,
        /// Bonding strength override
        #[arg(long)]
        sigma: Option<f64>,
        /// Agent count override (random and cap scenarios only)
        #[arg(long)]
        n: Option<usize>,
        /// Also render energy.svg and flock_metric.svg
        #[arg(long)]
        emit_plots: bool,
    },
    /// Run certification suites and print one pass/fail line per criterion
    Verify {
        /// Suite name, or "all" (the default)
        suite: Option<String>,
        /// Suite name (same as the positional form)
        #[arg(long = "suite", value_name = "NAME")]
        suite_flag: Option<String>,
        /// RNG seed for the suites
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a parameter grid and write one summary row per cell
    Sweep {
        /// JSON sweep configuration (base run plus grid axes)
        #[arg(long)]
        config: PathBuf,
        /// Directory for sweep.csv (overrides the base config's output_dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-render the SVG plots from an existing timeseries.csv
    Plot {
        /// Run configuration whose output_dir holds the artifacts
        #[arg(long)]
        config: Option<PathBuf>,
        /// Artifact directory (overrides the config's output_dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are requested output, not usage errors.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(code) = configure_threads() {
        return ExitCode::from(code);
    }
    let code = match cli.cmd {
        Cmd::Simulate {
            config,
            out,
            seed,
            dt,
            t_end,
            sigma,
            n,
            emit_plots,
        } => cmd_simulate(config, out, seed, dt, t_end, sigma, n, emit_plots),
        Cmd::Verify {
            suite,
            suite_flag,
            seed,
        } => cmd_verify(suite, suite_flag, seed),
        Cmd::Sweep { config, out } => cmd_sweep(&config, out),
        Cmd::Plot { config, out } => cmd_plot(config, out),
    };
    ExitCode::from(code)
}

/// SPHEREFLOCK_THREADS caps the rayon worker count for the whole process.
fn configure_threads() -> Result<(), u8> {
    let raw = match std::env::var("SPHEREFLOCK_THREADS") {
        Ok(raw) => raw,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => {
            eprintln!("error: SPHEREFLOCK_THREADS is unreadable: {e}");
            return Err(1);
        }
    };
    let threads: usize = match raw.trim().parse() {
        Ok(n) if n >= 1 => n,
        _ => {
            eprintln!("error: SPHEREFLOCK_THREADS must be a positive integer, got {raw:?}");
            return Err(1);
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| {
            eprintln!("error: cannot set up {threads} worker threads: {e}");
            1
        })
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    config_path: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    dt: Option<f64>,
    t_end: Option<f64>,
    sigma: Option<f64>,
    n: Option<usize>,
    emit_plots: bool,
) -> u8 {
    let mut config = match config_path {
        Some(path) => match RunConfig::from_path(&path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        },
        None => RunConfig::default_run(),
    };
    if let Some(out) = out {
        config.output_dir = Some(out);
    }
    if let Some(seed) = seed {
        config.params.seed = seed;
        config.scenario.clear_seed();
    }
    if let Some(dt) = dt {
        config.params.dt = dt;
    }
    if let Some(t_end) = t_end {
        config.params.t_end = t_end;
    }
    if let Some(sigma) = sigma {
        config.params.sigma = sigma;
    }
    if let Some(n) = n {
        if let Err(e) = config.scenario.set_n(n) {
            eprintln!("error: {e}");
            return 1;
        }
    }
    if emit_plots {
        config.emit_plots = true;
    }
    match runner::execute_run(&config) {
        Ok(outcome) => {
            println!(
                "{} agents, {} samples, E(0) = {}: artifacts in {}",
                outcome.manifest.n_agents,
                outcome.manifest.n_samples,
                csvio::fmt_f(outcome.manifest.initial_energy),
                outcome.out_dir.display()
            );
            match &outcome.traj.blowup {
                Some(b) => {
                    eprintln!(
                        "blowup: agent {} reached radius {:.3e} at t = {:.6}; artifacts cover the run up to that point",
                        b.agent, b.radius, b.t
                    );
                    3
                }
                None => 0,
            }
        }
        Err(RunError::Config(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(RunError::Simulate(e)) => {
            eprintln!("error: {e}");
            match e {
                SimulateError::Admissibility(_) => 2,
                _ => 1,
            }
        }
    }
}

fn cmd_verify(suite: Option<String>, suite_flag: Option<String>, seed: Option<u64>) -> u8 {
    let name = suite_flag.or(suite).unwrap_or_else(|| "all".to_owned());
    let fx = verify::Fixtures::new(seed.unwrap_or(verify::DEFAULT_SEED));
    match verify::run_selection(&name, &fx) {
        Some(outcomes) => {
            print!("{}", verify::render_table(&outcomes));
            verify::exit_code(&outcomes)
        }
        None => {
            eprintln!(
                "error: unknown suite {name:?}; expected all or one of: {}",
                verify::SUITES.join(", ")
            );
            64
        }
    }
}

fn cmd_sweep(config_path: &std::path::Path, out: Option<PathBuf>) -> u8 {
    let config = match SweepConfig::from_path(config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let out_dir = match out.or_else(|| config.base.output_dir.clone()) {
        Some(d) => d,
        None => {
            eprintln!("error: no output directory: set output_dir in the base config or pass --out");
            return 1;
        }
    };
    let rows = match sweep::run_sweep(&config) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("error: cannot create {}: {e}", out_dir.display());
        return 1;
    }
    let path = sweep::sweep_csv_path(&out_dir);
    if let Err(e) = csvio::write_file(&path, &csvio::sweep_bytes(&rows)) {
        eprintln!("error: {e}");
        return 1;
    }
    println!("{} cells: results in {}", rows.len(), path.display());
    0
}

fn cmd_plot(config_path: Option<PathBuf>, out: Option<PathBuf>) -> u8 {
    let dir = match out {
        Some(d) => d,
        None => {
            let Some(path) = config_path else {
                eprintln!("error: pass --out or --config to locate timeseries.csv");
                return 1;
            };
            match RunConfig::from_path(&path) {
                Ok(c) => match c.output_dir {
                    Some(d) => d,
                    None => {
                        eprintln!("error: the config has no output_dir");
                        return 1;
                    }
                },
                Err(e) => {
                    eprintln!("error: {e}");
                    return 1;
                }
            }
        }
    };
    let records = match csvio::read_timeseries(&dir.join("timeseries.csv")) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    for (name, svg) in [
        ("energy.svg", plot::energy_svg(&records)),
        ("flock_metric.svg", plot::flock_metric_svg(&records)),
    ] {
        if let Err(e) = csvio::write_file(&dir.join(name), svg.as_bytes()) {
            eprintln!("error: {e}");
            return 1;
        }
    }
    println!("rendered energy.svg and flock_metric.svg in {}", dir.display());
    0
}
