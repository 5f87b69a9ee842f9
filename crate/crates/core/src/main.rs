use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gbound::cli::{
    cmd_envelope, cmd_return_bounds, cmd_threebody_check, CliError, Overrides, RunConfig,
};

/// Bounds for bounded analytic functions from their g-fraction expansion.
#[derive(Parser)]
#[command(name = "gbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Two-sided envelope of f on a grid (CSV) plus a JSON summary.
    Envelope(Common),
    /// Lower bound and bracket for the first return of f to f(0) (JSON).
    ReturnBounds(Common),
    /// Collision certificate for one mutual distance of a three-body state (JSON).
    ThreebodyCheck {
        #[command(flatten)]
        common: Common,
        /// Also write the integrated trajectory as CSV.
        #[arg(long)]
        emit_trajectory: bool,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output path, overriding the config's "output".
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of grid points, overriding grid.points.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Truncation order p, overriding "order".
    #[arg(long)]
    order: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::load(&self.config)?;
        cfg.apply(&Overrides {
            out: self.out.clone(),
            grid_points: self.grid_points,
            order: self.order,
        });
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let outcome = match cli.command {
        Cmd::Envelope(c) => cmd_envelope(&c.load()?)?,
        Cmd::ReturnBounds(c) => cmd_return_bounds(&c.load()?)?,
        Cmd::ThreebodyCheck {
            common,
            emit_trajectory,
        } => cmd_threebody_check(&common.load()?, emit_trajectory)?,
    };
    Ok(outcome.stdout)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gbound: {e}");
            ExitCode::from(2)
        }
    }
}
