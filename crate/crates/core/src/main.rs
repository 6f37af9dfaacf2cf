use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qif::cli::{self, AxisRange, Backend, CliError, SweepSpec};
use qif::feasibility::ElectronScenario;

#[derive(Parser)]
#[command(name = "qif", version, about = "Interference of force: interferometer simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct GridArgs {
    /// Number of momentum grid points (power of two). Defaults to $QIF_GRID_N or 4096.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Grid covers [-p_max, p_max) in units of W.
    #[arg(long, default_value_t = 16.0)]
    p_max: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Oracle,
    Grid,
}

#[derive(Subcommand)]
enum Command {
    /// Run a .qif experiment description.
    Simulate {
        file: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sweep (t, delta) and write port statistics as CSV.
    Sweep {
        #[arg(long, default_value_t = 0.01)]
        t_min: f64,
        #[arg(long, default_value_t = 0.99)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        t_steps: usize,
        #[arg(long, default_value_t = 0.01)]
        delta_min: f64,
        #[arg(long, default_value_t = 2.0)]
        delta_max: f64,
        #[arg(long, default_value_t = 200)]
        delta_steps: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "oracle")]
        backend: BackendArg,
        /// Output CSV path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Compare the grid pipeline with the closed-form Gaussian results.
    OracleCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Kick a Gaussian with a finite linear-potential pulse.
    Propagate {
        #[arg(long, allow_hyphen_values = true)]
        force: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 100)]
        substeps: usize,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Electron interferometer estimates in SI units.
    Feasibility {
        #[arg(long, default_value_t = 6000.0)]
        energy_ev: f64,
        #[arg(long, default_value_t = 1.5e-6)]
        slit_width: f64,
        #[arg(long, default_value_t = 1.0)]
        drift: f64,
        #[arg(long, default_value_t = 1e-3)]
        plate_separation: f64,
        #[arg(long, default_value_t = 1e-2)]
        plate_length: f64,
        #[arg(long, default_value_t = 2e-4)]
        voltage: f64,
    },
    /// Two-level atom protocol with state selection.
    Bec {
        #[arg(long)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        delta_a: f64,
        #[arg(long, allow_hyphen_values = true)]
        delta_b: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn run(command: Command) -> Result<String, CliError> {
    let grid = |g: GridArgs| cli::resolve_grid(g.grid_n, g.p_max);
    match command {
        Command::Simulate { file, grid: g } => cli::cmd_simulate(&file, grid(g)?),
        Command::Sweep {
            t_min,
            t_max,
            t_steps,
            delta_min,
            delta_max,
            delta_steps,
            alpha,
            backend,
            out,
            grid: g,
        } => {
            let spec = SweepSpec {
                t: AxisRange::new(t_min, t_max, t_steps),
                delta: AxisRange::new(delta_min, delta_max, delta_steps),
                alpha,
                backend: match backend {
                    BackendArg::Oracle => Backend::Oracle,
                    BackendArg::Grid => Backend::Grid,
                },
            };
            let summary = cli::cmd_sweep(&spec, grid(g)?, out.as_deref())?;
            // The CSV may be on stdout; keep the summary off it in that case.
            if out.is_none() {
                eprintln!("{summary}");
                Ok(String::new())
            } else {
                Ok(summary.to_string())
            }
        }
        Command::OracleCheck { samples, seed, grid: g } => {
            Ok(cli::cmd_oracle_check(samples, seed, grid(g)?)?.to_string())
        }
        Command::Propagate {
            force,
            tau,
            substeps,
            mass,
            grid: g,
        } => Ok(cli::cmd_propagate(force, tau, substeps, mass, grid(g)?)?.to_string()),
        Command::Feasibility {
            energy_ev,
            slit_width,
            drift,
            plate_separation,
            plate_length,
            voltage,
        } => Ok(cli::cmd_feasibility(ElectronScenario {
            kinetic_energy_ev: energy_ev,
            slit_width,
            drift_distance: drift,
            plate_separation,
            plate_length,
            voltage,
        })?
        .to_string()),
        Command::Bec {
            t,
            delta_a,
            delta_b,
            grid: g,
        } => Ok(cli::cmd_bec(t, delta_a, delta_b, grid(g)?)?.to_string()),
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args.command) {
        Ok(text) => {
            if !text.is_empty() {
                println!("{}", text.trim_end());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
