//! Scenario runner for the `mixphase` command-line tool.
//!
//! A scenario is a JSON document `{"kind", "parameters", "output"}`; see
//! `docs/scenarios.md` for the per-kind parameter schema. Command-line flags
//! override the matching scenario values.

pub mod error;
pub mod families;
pub mod output;
pub mod qubit_scan;
pub mod scenario;
pub mod two_photon;
pub mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use error::{CliError, CliResult};
use output::Report;
use scenario::{apply_overrides, Format, Kind, Overrides, Scenario};

/// A finished run: the report and where it should go.
pub struct Run {
    pub report: Report,
    pub format: Format,
    pub path: Option<PathBuf>,
}

fn resolve<P>(scenario: &Scenario, overrides: &Overrides) -> CliResult<P>
where
    P: serde::de::DeserializeOwned + Default + scenario::Common,
{
    let mut params: P = scenario.parameters()?;
    apply_overrides(&mut params, overrides, scenario.kind)?;
    Ok(params)
}

/// Loads `config` (if any), checks it against `kind`, and runs it.
pub fn execute(kind: Option<Kind>, config: Option<&Path>, overrides: &Overrides) -> CliResult<Run> {
    let scenario = match (config, kind) {
        (Some(path), _) => Scenario::load(path)?,
        (None, Some(k)) => Scenario::empty(k),
        (None, None) => return Err(CliError::config("config", "a scenario file is required")),
    };
    if let Some(k) = kind {
        if k != scenario.kind {
            return Err(CliError::config(
                "kind",
                format!("scenario is {}, command is {}", scenario.kind.name(), k.name()),
            ));
        }
    }
    let report = match scenario.kind {
        Kind::QubitScan => qubit_scan::run(&resolve(&scenario, overrides)?)?,
        Kind::Families => families::run(&resolve(&scenario, overrides)?)?,
        Kind::TwoPhoton => two_photon::run(&resolve(&scenario, overrides)?)?,
        Kind::Verify => verify::run(&resolve(&scenario, overrides)?)?,
    };
    let path = overrides.out.clone().or_else(|| scenario.output.path.clone());
    let inferred = path
        .as_deref()
        .and_then(Path::extension)
        .and_then(|e| (e == "json").then_some(Format::Json));
    let format = overrides.format.or(scenario.output.format).or(inferred).unwrap_or_default();
    Ok(Run { report, format, path })
}

impl Run {
    /// Writes the report. A closed standard output (e.g. piped into `head`)
    /// is not an error.
    pub fn emit(&self) -> CliResult<()> {
        match self.write_out() {
            Err(CliError::Write(e)) if e.kind() == std::io::ErrorKind::BrokenPipe && self.path.is_none() => Ok(()),
            other => other,
        }
    }

    fn write_out(&self) -> CliResult<()> {
        match &self.path {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                self.report.write(self.format, &mut w)?;
                w.flush()?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                self.report.write(self.format, &mut lock)?;
                lock.flush()?;
            }
        }
        Ok(())
    }
}
