//! Command-line front end: `envelope`, `return-bounds`, `threebody-check`.

pub mod config;
pub mod output;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::conformal::scale_taylor;
use crate::envelope::{envelope, write_csv};
use crate::error::Error;
use crate::format::sig17;
use crate::gfraction::{extract_coefficients, Extraction, ExtractionStop};
use crate::return_time::certify;
use crate::three_body::{
    collision_check, first_integrals, observe_returns, ObservedReturns, Trajectory,
    TrajectorySample,
};

pub use config::{Command, Overrides, RunConfig};
use output::{
    to_json, CertificateOut, EnvelopeSummary, ObservedOut, ReturnBoundsDoc, ThreeBodyDoc,
    VerdictOut,
};

#[derive(Debug)]
pub enum CliError {
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Field {
        field: String,
        message: String,
    },
    Io {
        path: PathBuf,
        source: io::Error,
    },
    Compute(Error),
}

impl CliError {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse {
                line,
                column,
                message,
            } => {
                write!(
                    f,
                    "config parse error at line {line}, column {column}: {message}"
                )
            }
            CliError::Field { field, message } => {
                write!(f, "invalid config field '{field}': {message}")
            }
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

/// Where a command's main output went.
#[derive(Debug, Default)]
pub struct Outcome {
    /// Text for standard output.
    pub stdout: String,
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn extraction_for(
    cfg: &RunConfig,
    order: usize,
) -> Result<(crate::conformal::DomainSpec, Extraction), CliError> {
    let spec = cfg.domain_spec()?;
    let taylor = cfg.taylor_data()?;
    let scaled =
        scale_taylor(&taylor, &spec).map_err(|e| CliError::field("taylor", e.to_string()))?;
    let extraction = extract_coefficients(&scaled, &spec, order)?;
    if let Some(ExtractionStop::ClassViolation { index, value }) = extraction.stop {
        return Err(CliError::field(
            "taylor",
            format!("data cannot come from a bounded function: g_{index} = {value} outside [0, 1]"),
        ));
    }
    Ok((spec, extraction))
}

/// Envelope CSV to the output path (or standard output) and a JSON summary.
pub fn cmd_envelope(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.check_command(Command::Envelope)?;
    let taylor = cfg.taylor_data()?;
    let order = cfg.order_for(&taylor)?;
    let (spec, extraction) = extraction_for(cfg, order)?;
    // a rational tail ends the fraction early; its prefix is then exact
    let p = order.min(extraction.fraction.len());
    let grid = cfg.grid(&spec)?;
    let points = envelope(&extraction.fraction, &spec, p, &grid)?;
    let failed = points.iter().filter(|p| p.is_err()).count();
    let mut csv = Vec::new();
    write_csv(&mut csv, &grid, &points).expect("writing to memory");
    let summary = EnvelopeSummary::new(
        &spec,
        &extraction,
        p,
        grid.len(),
        failed,
        cfg.output.as_deref(),
    );
    let stdout = match &cfg.output {
        Some(path) => {
            let mut out = create(path)?;
            out.write_all(&csv)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(path, e))?;
            to_json(&summary)
        }
        None => {
            let mut s = String::from_utf8(csv).expect("CSV is ASCII");
            s.push_str(&to_json(&summary));
            s
        }
    };
    Ok(Outcome { stdout })
}

/// JSON first-return certificate.
pub fn cmd_return_bounds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.check_command(Command::ReturnBounds)?;
    let taylor = cfg.taylor_data()?;
    let order = cfg.order_for(&taylor)?.min(2);
    let (spec, extraction) = extraction_for(cfg, order)?;
    let cert = certify(&extraction.fraction, &spec)?;
    let json = to_json(&ReturnBoundsDoc::new(&spec, &extraction, &cert));
    emit(cfg.output.as_deref(), json)
}

fn emit(path: Option<&Path>, json: String) -> Result<Outcome, CliError> {
    match path {
        Some(p) => {
            write_text(p, &json)?;
            Ok(Outcome::default())
        }
        None => Ok(Outcome { stdout: json }),
    }
}

/// JSON collision verdict; with `emit_trajectory` also the integrated
/// trajectory as CSV.
pub fn cmd_threebody_check(cfg: &RunConfig, emit_trajectory: bool) -> Result<Outcome, CliError> {
    cfg.check_command(Command::ThreebodyCheck)?;
    let tb = cfg
        .three_body
        .as_ref()
        .ok_or_else(|| CliError::field("three_body", "missing"))?;
    let sys = tb.system()?;
    let chi = tb.chi()?;
    let pair = tb.pair()?;
    let controls = tb.controls()?;
    if emit_trajectory && controls.is_none() {
        return Err(CliError::field(
            "three_body.integration",
            "required with --emit-trajectory",
        ));
    }

    let mut trajectories = None;
    let (observed, observed_out) = match (tb.observed_return, controls) {
        (Some(tau), _) => {
            if !tau.is_finite() {
                return Err(CliError::field(
                    "three_body.observed_return",
                    "must be finite",
                ));
            }
            let obs = ObservedReturns::from_time(tau);
            (Some(obs), Some(ObservedOut::new(&obs, "config", None)))
        }
        (None, Some((ctl, horizon))) => {
            let (obs, fwd, bwd) = observe_returns(&sys, pair, &ctl, horizon)?;
            let drift = fwd.energy_drift.max(bwd.energy_drift);
            trajectories = Some((fwd, bwd));
            (
                Some(obs),
                Some(ObservedOut::new(&obs, "integration", Some(drift))),
            )
        }
        (None, None) => (None, None),
    };
    if emit_trajectory && trajectories.is_none() {
        let (ctl, horizon) = controls.expect("checked above");
        let (_, fwd, bwd) = observe_returns(&sys, pair, &ctl, horizon)?;
        trajectories = Some((fwd, bwd));
    }

    let report = collision_check(&sys, chi, pair, observed.as_ref())?;
    let trajectory_path = if emit_trajectory {
        let path = tb
            .trajectory_output
            .clone()
            .unwrap_or_else(|| PathBuf::from("trajectory.csv"));
        let (fwd, bwd) = trajectories.as_ref().expect("integrated above");
        let mut out = create(&path)?;
        write_trajectory(&mut out, fwd, bwd)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io(&path, e))?;
        Some(path.display().to_string())
    } else {
        None
    };

    let doc = ThreeBodyDoc {
        version: output::VERSION,
        command: "threebody-check",
        pair: [pair.first() + 1, pair.second() + 1],
        first_integrals: (&first_integrals(&sys)).into(),
        sundman: (&report.sundman).into(),
        taylor: ThreeBodyDoc::taylor(report.taylor.derivatives()),
        fraction: report.extraction.as_ref().map(Into::into),
        certificate: report.certificate.as_ref().map(CertificateOut::from),
        observed: observed_out,
        verdict: VerdictOut::from(&report.verdict),
        trajectory: trajectory_path,
    };
    emit(cfg.output.as_deref(), to_json(&doc))
}

/// Backward samples (time-reversed) then forward samples, one row per time.
pub fn write_trajectory<W: Write>(
    out: &mut W,
    fwd: &Trajectory,
    bwd: &Trajectory,
) -> io::Result<()> {
    let mut header = vec!["t".to_string()];
    for b in 1..=3 {
        for c in ["x", "y", "z"] {
            header.push(format!("{c}{b}"));
        }
    }
    for b in 1..=3 {
        for c in ["vx", "vy", "vz"] {
            header.push(format!("{c}{b}"));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    let rows = bwd.samples.iter().rev().chain(fwd.samples.iter().skip(1));
    for TrajectorySample { t, system } in rows {
        let mut fields = vec![sig17(*t)];
        for p in system.positions() {
            fields.extend(p.iter().map(|&x| sig17(x)));
        }
        for v in system.velocities() {
            fields.extend(v.iter().map(|&x| sig17(x)));
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}
