use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use ewsolve::runner::{execute, execute_stability, execute_sweep, StabilityJob};
use ewsolve::{Error, RootFamily};

/// Equal width wave equation solver: cubic Hermite collocation in space,
/// linearized Crank-Nicolson in time.
#[derive(Parser)]
#[command(name = "ewsolve", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one problem from a key=value config file.
    Run {
        /// Config file; `problem=` is required, other keys override defaults.
        config: PathBuf,
    },
    /// Scan the von Neumann amplification of the linearized step.
    Stability {
        /// Frozen advecting value.
        #[arg(long, default_value_t = 0.0)]
        ubar: f64,
        /// Frozen advecting slope.
        #[arg(long, default_value_t = 0.0)]
        uprime: f64,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        /// Element width.
        #[arg(long, default_value_t = 0.03)]
        h: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Number of mode angles scanned over [0, 2pi).
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Collocation root family: legendre or chebyshev.
        #[arg(long, default_value = "legendre")]
        roots: String,
        /// Output CSV (phi,xi_row1,xi_row2).
        #[arg(long, default_value = "stability.csv")]
        out: PathBuf,
    },
    /// Run several config files concurrently.
    Sweep {
        /// Config files; default output names take each file's stem.
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
}

fn run(cmd: Cmd) -> Result<(), Error> {
    let stdout = std::io::stdout();
    match cmd {
        Cmd::Run { config } => {
            let text = std::fs::read_to_string(&config).map_err(|e| {
                Error::ConfigInvalid(format!("cannot read {}: {e}", config.display()))
            })?;
            let cfg = ewsolve::config::parse_config(&text)?;
            execute(&cfg, &mut stdout.lock())?;
            Ok(())
        }
        Cmd::Stability { ubar, uprime, dt, h, mu, grid, roots, out } => {
            let job = StabilityJob {
                ubar,
                uprime,
                dt,
                h,
                mu,
                grid,
                roots: roots.parse::<RootFamily>()?,
                out,
            };
            execute_stability(&job, &mut stdout.lock())
        }
        Cmd::Sweep { configs } => {
            let results = execute_sweep(&configs);
            let mut out = stdout.lock();
            let mut first_err: Option<Error> = None;
            for (path, result, log) in results {
                out.write_all(&log)?;
                match result {
                    Ok(art) => {
                        writeln!(out, "{}: ok ({} rows)", path.display(), art.rows.len())?;
                    }
                    Err(e) => {
                        writeln!(out, "{}: FAILED: {e}", path.display())?;
                        // Report the most severe exit code across the sweep.
                        let worse = match &first_err {
                            None => true,
                            Some(prev) => e.exit_code() > prev.exit_code(),
                        };
                        if worse {
                            first_err = Some(e);
                        }
                    }
                }
            }
            match first_err {
                None => Ok(()),
                Some(e) => Err(e),
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.cmd) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
