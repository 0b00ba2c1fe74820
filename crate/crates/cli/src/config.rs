//! Experiment configuration: a JSON file, inline flags, or both (flags win).

use std::path::{Path, PathBuf};

use gaplab_core::{Operator, ToleranceConfig};
use serde::Deserialize;

use crate::descriptor::{Descriptor, SCHEMA};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Fuglede,
    Density,
    Suite,
    Homotopy,
    Metric,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fuglede => "fuglede",
            Command::Density => "density",
            Command::Suite => "suite",
            Command::Homotopy => "homotopy",
            Command::Metric => "metric",
        }
    }

    fn fields(self) -> &'static [&'static str] {
        match self {
            Command::Fuglede => &["n_max", "out"],
            Command::Density => &["n_max", "out", "tolerances", "operator"],
            Command::Suite => &["seed", "trials", "dim_max", "out", "tolerances"],
            Command::Homotopy => &["steps", "eps_step", "out", "tolerances", "a", "b"],
            Command::Metric => &["out", "tolerances", "a", "b", "which"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    GapProj,
    GapSup,
    Riesz,
    Tilde,
}

impl std::str::FromStr for Which {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "gap_proj" => Ok(Which::GapProj),
            "gap_sup" => Ok(Which::GapSup),
            "riesz" => Ok(Which::Riesz),
            "tilde" => Ok(Which::Tilde),
            other => Err(CliError::Config(format!(
                "which: unknown metric `{other}`, expected gap_proj, gap_sup, riesz or tilde"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub eps_rank: Option<f64>,
    pub eps_residual: Option<f64>,
    pub eps_bounded: Option<f64>,
}

/// Every option any command accepts; each command admits a subset.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default)]
    pub schema: Option<u32>,
    pub n_max: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub dim_max: Option<usize>,
    pub steps: Option<usize>,
    pub eps_step: Option<f64>,
    pub out: Option<PathBuf>,
    pub tolerances: Option<Tolerances>,
    pub operator: Option<Descriptor>,
    pub a: Option<Descriptor>,
    pub b: Option<Descriptor>,
    pub which: Option<String>,
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let s: Settings = serde_path_to_error::deserialize(de).map_err(|e| {
            CliError::Config(format!("config.{}: {}", e.path(), e.inner()))
        })?;
        match s.schema {
            Some(SCHEMA) => Ok(s),
            Some(v) => Err(CliError::Config(format!(
                "config.schema: unsupported schema {v}, expected {SCHEMA}"
            ))),
            None => Err(CliError::Config("config.schema: missing field `schema`".into())),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(self, flags: Settings) -> Settings {
        Settings {
            schema: self.schema.or(flags.schema),
            n_max: flags.n_max.or(self.n_max),
            seed: flags.seed.or(self.seed),
            trials: flags.trials.or(self.trials),
            dim_max: flags.dim_max.or(self.dim_max),
            steps: flags.steps.or(self.steps),
            eps_step: flags.eps_step.or(self.eps_step),
            out: flags.out.or(self.out),
            tolerances: flags.tolerances.or(self.tolerances),
            operator: flags.operator.or(self.operator),
            a: flags.a.or(self.a),
            b: flags.b.or(self.b),
            which: flags.which.or(self.which),
        }
    }

    /// Rejects options the command does not use.
    pub fn check_fields(&self, cmd: Command) -> Result<(), CliError> {
        let present = [
            ("n_max", self.n_max.is_some()),
            ("seed", self.seed.is_some()),
            ("trials", self.trials.is_some()),
            ("dim_max", self.dim_max.is_some()),
            ("steps", self.steps.is_some()),
            ("eps_step", self.eps_step.is_some()),
            ("out", self.out.is_some()),
            ("tolerances", self.tolerances.is_some()),
            ("operator", self.operator.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("which", self.which.is_some()),
        ];
        match present
            .iter()
            .find(|(name, set)| *set && !cmd.fields().contains(name))
        {
            Some((name, _)) => Err(CliError::Config(format!(
                "{name}: not used by `{}`",
                cmd.name()
            ))),
            None => Ok(()),
        }
    }

    pub fn tolerance(&self) -> Result<ToleranceConfig, CliError> {
        let mut tol = ToleranceConfig::default();
        if let Some(t) = &self.tolerances {
            tol.eps_rank = t.eps_rank.unwrap_or(tol.eps_rank);
            tol.eps_residual = t.eps_residual.unwrap_or(tol.eps_residual);
            tol.eps_bounded = t.eps_bounded.unwrap_or(tol.eps_bounded);
        }
        tol.validate()
            .map_err(|e| CliError::Config(format!("tolerances: {e}")))?;
        Ok(tol)
    }

    pub fn operator(&self, name: &str) -> Result<Operator, CliError> {
        let d = match name {
            "operator" => &self.operator,
            "a" => &self.a,
            "b" => &self.b,
            _ => unreachable!("unknown operator slot"),
        };
        d.as_ref()
            .ok_or_else(|| CliError::Config(format!("{name}: operator descriptor required")))?
            .to_operator(name)
    }

    pub fn n_max(&self) -> Result<usize, CliError> {
        positive("n_max", self.n_max.unwrap_or(DEFAULT_N_MAX))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn trials(&self) -> Result<usize, CliError> {
        positive("trials", self.trials.unwrap_or(DEFAULT_TRIALS))
    }

    pub fn dim_max(&self) -> Result<usize, CliError> {
        positive("dim_max", self.dim_max.unwrap_or(DEFAULT_DIM_MAX))
    }

    pub fn steps(&self) -> Result<usize, CliError> {
        let steps = self.steps.unwrap_or(DEFAULT_STEPS);
        if steps < 2 {
            return Err(CliError::Config(format!("steps: must be at least 2, got {steps}")));
        }
        Ok(steps)
    }

    pub fn eps_step(&self) -> Result<f64, CliError> {
        let e = self.eps_step.unwrap_or(DEFAULT_EPS_STEP);
        if !(e > 0.0 && e.is_finite()) {
            return Err(CliError::Config(format!("eps_step: must be positive, got {e}")));
        }
        Ok(e)
    }

    pub fn which(&self) -> Result<Which, CliError> {
        self.which
            .as_deref()
            .ok_or_else(|| CliError::Config("which: metric name required".into()))?
            .parse()
    }
}

pub const DEFAULT_N_MAX: usize = 20;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 500;
pub const DEFAULT_DIM_MAX: usize = 8;
pub const DEFAULT_STEPS: usize = 101;
pub const DEFAULT_EPS_STEP: f64 = 0.05;

fn positive(name: &str, v: usize) -> Result<usize, CliError> {
    if v == 0 {
        return Err(CliError::Config(format!("{name}: must be at least 1")));
    }
    Ok(v)
}
