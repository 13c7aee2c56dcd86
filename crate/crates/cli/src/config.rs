//! Experiment configuration: a command plus a flat parameter map, loaded from
//! JSON and/or flags. Flags override the file field by field.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Sample,
    Exact,
    Local,
    Lowdeg,
    Ogp,
    Phase,
    Thresholds,
    Exponent,
}

impl Command {
    /// Commands whose output is a per-trial CSV.
    pub fn is_tabular(self) -> bool {
        matches!(self, Command::Local | Command::Lowdeg | Command::Ogp)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_timing: Option<bool>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),+) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )+
    };
}

impl Params {
    /// `self` with every field set in `top` replaced.
    pub fn overlay(mut self, top: Params) -> Params {
        overlay!(self, top; n, d, gamma, p, epsilon, k, c, gamma_steps, eta, x, y, max_n, trials, seed,
            stream, workers, graph, out, csv, record, no_timing);
        self
    }

    /// Sets a numeric parameter by name, as used by sweep grids.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), CliError> {
        let int = |v: f64| -> Result<usize, CliError> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(CliError::config(name, format!("expected a non-negative integer, got {v}")))
            }
        };
        match name {
            "n" => self.n = Some(int(value)?),
            "d" => self.d = Some(value),
            "gamma" => self.gamma = Some(value),
            "p" => self.p = Some(value),
            "epsilon" => self.epsilon = Some(value),
            "K" => self.k = Some(int(value)?),
            "c" => self.c = Some(value),
            "gamma_steps" => self.gamma_steps = Some(int(value)?),
            "eta" => self.eta = Some(value),
            "trials" => self.trials = Some(int(value)?),
            _ => return Err(CliError::config("grid", format!("`{name}` cannot be swept"))),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub parameters: Params,
}

impl ExperimentConfig {
    pub fn new(command: Command, parameters: Params) -> Self {
        Self { command, parameters }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn need<T: Copy>(v: Option<T>, name: &'static str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::config(name, "required"))
}

fn check(ok: bool, name: &'static str, why: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::config(name, why()))
    }
}

fn check_nd(n: usize, d: f64) -> Result<(), CliError> {
    check(n >= 1, "n", || "must be positive".into())?;
    check(d.is_finite() && d > 0.0 && d < n as f64, "d", || format!("must lie in (0, n = {n}), got {d}"))
}

fn check_gamma(g: f64) -> Result<(), CliError> {
    check(g > 0.0 && g <= 0.5, "gamma", || format!("must lie in (0, 1/2], got {g}"))
}

fn check_epsilon(e: f64) -> Result<(), CliError> {
    check(e > 0.0 && e < 1.0, "epsilon", || format!("must lie in (0, 1), got {e}"))
}

/// Parameters after defaults and validation. Defaults: `trials = 1`,
/// `seed = 0`, `stream = 0`, `gamma = 1/2`, `gamma_steps = 1`, `eta = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Checked {
    pub command: Command,
    pub n: usize,
    pub d: f64,
    pub gamma: f64,
    pub p: f64,
    pub epsilon: f64,
    pub k: usize,
    pub c: f64,
    pub gamma_steps: usize,
    pub eta: f64,
    pub x: f64,
    pub y: f64,
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
    pub stream: u64,
    pub graph: Option<PathBuf>,
    pub no_timing: bool,
}

impl ExperimentConfig {
    /// Checks every parameter the command uses against its preconditions.
    pub fn validate(&self) -> Result<Checked, CliError> {
        let p = &self.parameters;
        let mut out = Checked {
            command: self.command,
            n: 0,
            d: 0.0,
            gamma: p.gamma.unwrap_or(0.5),
            p: 0.0,
            epsilon: 0.0,
            k: 0,
            c: 0.0,
            gamma_steps: p.gamma_steps.unwrap_or(1),
            eta: p.eta.unwrap_or(0.0),
            x: 0.0,
            y: 0.0,
            max_n: p.max_n.unwrap_or(bipbis::exact::DEFAULT_MAX_N),
            trials: p.trials.unwrap_or(1),
            seed: p.seed.unwrap_or(0),
            stream: p.stream.unwrap_or(0),
            graph: p.graph.clone(),
            no_timing: p.no_timing.unwrap_or(false),
        };
        if let Some(w) = p.workers {
            check(w >= 1, "workers", || "must be positive".into())?;
        }
        if self.command.is_tabular() {
            check(out.trials >= 1, "trials", || "must be positive".into())?;
        }
        match self.command {
            Command::Sample => {
                out.n = need(p.n, "n")?;
                out.d = need(p.d, "d")?;
                check_nd(out.n, out.d)?;
            }
            Command::Exact => {
                check(out.graph.is_some(), "graph", || "required".into())?;
                check_gamma(out.gamma)?;
                check(out.max_n <= 64, "max_n", || format!("at most 64, got {}", out.max_n))?;
            }
            Command::Local => {
                out.n = need(p.n, "n")?;
                out.d = need(p.d, "d")?;
                out.p = need(p.p, "p")?;
                check_nd(out.n, out.d)?;
                check((0.0..=1.0).contains(&out.p), "p", || format!("must lie in [0, 1], got {}", out.p))?;
                check_gamma(out.gamma)?;
            }
            Command::Lowdeg => {
                out.n = need(p.n, "n")?;
                out.d = need(p.d, "d")?;
                out.epsilon = need(p.epsilon, "epsilon")?;
                check_nd(out.n, out.d)?;
                check(out.d > 1.0, "d", || format!("must exceed 1, got {}", out.d))?;
                check_epsilon(out.epsilon)?;
                check(out.eta.is_finite() && out.eta >= 0.0, "eta", || format!("must be non-negative, got {}", out.eta))?;
            }
            Command::Ogp => {
                out.n = need(p.n, "n")?;
                out.d = need(p.d, "d")?;
                out.epsilon = need(p.epsilon, "epsilon")?;
                out.k = need(p.k, "K")?;
                out.c = need(p.c, "c")?;
                check_nd(out.n, out.d)?;
                check(out.d > 1.0, "d", || format!("must exceed 1, got {}", out.d))?;
                check_epsilon(out.epsilon)?;
                check(out.k >= 2, "K", || format!("must be at least 2, got {}", out.k))?;
                check(out.c.is_finite() && out.c > 0.0, "c", || format!("must be positive, got {}", out.c))?;
                check(out.gamma_steps >= 1, "gamma_steps", || "must be positive".into())?;
                check(out.eta.is_finite() && out.eta >= 0.0, "eta", || format!("must be non-negative, got {}", out.eta))?;
            }
            Command::Phase => {
                out.x = need(p.x, "x")?;
                out.y = need(p.y, "y")?;
                check(out.x.is_finite() && out.x >= 0.0, "x", || format!("must be non-negative, got {}", out.x))?;
                check(out.y.is_finite() && out.y >= 0.0, "y", || format!("must be non-negative, got {}", out.y))?;
            }
            Command::Thresholds => {
                out.gamma = need(p.gamma, "gamma")?;
                check_gamma(out.gamma)?;
            }
            Command::Exponent => {
                out.c = need(p.c, "c")?;
                out.d = need(p.d, "d")?;
                out.gamma = need(p.gamma, "gamma")?;
                check(out.c.is_finite() && out.c > 0.0, "c", || format!("must be positive, got {}", out.c))?;
                check(out.d.is_finite() && out.d > 1.0, "d", || format!("must exceed 1, got {}", out.d))?;
                check_gamma(out.gamma)?;
            }
        }
        Ok(out)
    }
}
