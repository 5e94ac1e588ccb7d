//! JSON scenario files and command-line overrides.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    QubitScan,
    Families,
    TwoPhoton,
    Verify,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::QubitScan => "qubit-scan",
            Kind::Families => "families",
            Kind::TwoPhoton => "two-photon",
            Kind::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    #[serde(default)]
    pub parameters: Value,
    #[serde(default)]
    pub output: OutputSpec,
}

impl Scenario {
    pub fn empty(kind: Kind) -> Self {
        Self {
            kind,
            parameters: Value::Null,
            output: OutputSpec::default(),
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(field_of(&e.to_string(), "scenario"), e.to_string()))
    }

    /// Decodes `parameters` into the typed parameter set of this kind.
    pub fn parameters<P: DeserializeOwned + Default>(&self) -> CliResult<P> {
        match &self.parameters {
            Value::Null => Ok(P::default()),
            Value::Object(_) => serde_json::from_value(self.parameters.clone()).map_err(|e| {
                let msg = e.to_string();
                CliError::config(format!("parameters.{}", field_of(&msg, "?")), msg)
            }),
            _ => Err(CliError::config("parameters", "must be a JSON object")),
        }
    }
}

/// Pulls the backquoted field name out of a serde message when there is one.
fn field_of(message: &str, fallback: &str) -> String {
    message
        .split('`')
        .nth(1)
        .map(str::to_owned)
        .unwrap_or_else(|| fallback.to_owned())
}

/// Values given on the command line; each one replaces the scenario's.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub tol: Option<f64>,
}

/// Parameters every kind accepts.
pub trait Common {
    fn seed_mut(&mut self) -> &mut u64;
    fn steps_mut(&mut self) -> Option<&mut usize> {
        None
    }
    fn tol_mut(&mut self) -> &mut f64;
}

pub fn apply_overrides<P: Common>(params: &mut P, overrides: &Overrides, kind: Kind) -> CliResult<()> {
    if let Some(seed) = overrides.seed {
        *params.seed_mut() = seed;
    }
    if let Some(steps) = overrides.steps {
        match params.steps_mut() {
            Some(s) => *s = steps,
            None => return Err(CliError::config("steps", format!("{} takes no step count", kind.name()))),
        }
    }
    if let Some(tol) = overrides.tol {
        *params.tol_mut() = tol;
    }
    check_tol(*params.tol_mut())?;
    if let Some(steps) = params.steps_mut() {
        if *steps == 0 {
            return Err(CliError::config("steps", "must be at least 1"));
        }
    }
    Ok(())
}

fn check_tol(tol: f64) -> CliResult<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::config("tol", format!("must be positive and finite, got {tol}")));
    }
    Ok(())
}

/// A value axis: an explicit list, or `count` evenly spaced points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        /// Include `stop` itself; defaults to true.
        #[serde(default = "yes")]
        endpoint: bool,
    },
}

fn yes() -> bool {
    true
}

impl Axis {
    pub fn range(start: f64, stop: f64, count: usize, endpoint: bool) -> Self {
        Axis::Range {
            start,
            stop,
            count,
            endpoint,
        }
    }

    pub fn values(&self, field: &str) -> CliResult<Vec<f64>> {
        let values = match *self {
            Axis::List(ref v) => v.clone(),
            Axis::Range {
                start,
                stop,
                count,
                endpoint,
            } => {
                if count == 0 {
                    return Err(CliError::config(field, "count must be at least 1"));
                }
                let denom = if endpoint { count.saturating_sub(1).max(1) } else { count } as f64;
                (0..count).map(|k| start + (stop - start) * k as f64 / denom).collect()
            }
        };
        if values.is_empty() {
            return Err(CliError::config(field, "no values"));
        }
        if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(CliError::config(field, format!("non-finite value {bad}")));
        }
        Ok(values)
    }

    pub fn values_in(&self, field: &str, lo: f64, hi: f64) -> CliResult<Vec<f64>> {
        let values = self.values(field)?;
        if let Some(bad) = values.iter().find(|x| !(lo..=hi).contains(*x)) {
            return Err(CliError::config(field, format!("{bad} outside [{lo}, {hi}]")));
        }
        Ok(values)
    }
}

pub const TWO_PI: f64 = 2.0 * PI;
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn default_tol() -> f64 {
    DEFAULT_TOL
}
