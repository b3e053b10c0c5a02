//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! theta1 = 0.6
//! theta2 = 0.8
//! u_correct = 1
//! u_wrong = 0
//! cost = 0.1
//! costs = 0, 0.1, 0.2
//! priors = 0.3, 0.7
//! subjective_p = 0.5
//! seed = 42
//! grid = 101
//! draws = 1000000
//! ```
//!
//! Every key is optional and falls back to [`RunConfig::default`], the
//! introductory scenario. Unknown or repeated keys are rejected, and every
//! error names the offending line.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::error::ModelError;
use crate::model::{Environment, InformationStructure, PayoffStructure, Scenario};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}{message}", location(*.line))]
pub struct ConfigError {
    /// 1-based line number, when the error is tied to one.
    pub line: Option<usize>,
    pub message: String,
}

fn location(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

/// Parameters for one CLI run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub theta1: f64,
    pub theta2: f64,
    pub u_correct: f64,
    pub u_wrong: f64,
    /// Processing cost for single-cost commands.
    pub cost: f64,
    /// Cost list for sweeps over costs.
    pub costs: Vec<f64>,
    /// One or two priors.
    pub priors: Vec<f64>,
    /// Observer belief used for ex-ante probabilities; never defaulted inside
    /// the model, only here.
    pub subjective_p: Option<f64>,
    pub seed: u64,
    /// Number of prior points in sweeps and verification grids.
    pub grid: usize,
    /// Monte Carlo draws.
    pub draws: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            theta1: 0.6,
            theta2: 0.8,
            u_correct: 1.0,
            u_wrong: 0.0,
            cost: 0.1,
            costs: vec![0.0, 0.1, 0.2],
            priors: vec![0.3, 0.7],
            subjective_p: Some(0.5),
            seed: 42,
            grid: 101,
            draws: 1_000_000,
        }
    }
}

const KEYS: [&str; 11] = [
    "theta1",
    "theta2",
    "u_correct",
    "u_wrong",
    "cost",
    "costs",
    "priors",
    "subjective_p",
    "seed",
    "grid",
    "draws",
];

fn parse_scalar<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| ConfigError::at(line, format!("`{key}`: cannot parse `{raw}`: {e}")))
}

fn parse_list(line: usize, key: &str, raw: &str) -> Result<Vec<f64>, ConfigError> {
    if raw.is_empty() {
        return Err(ConfigError::at(line, format!("`{key}`: empty list")));
    }
    raw.split(',')
        .map(|item| parse_scalar::<f64>(line, key, item.trim()))
        .collect()
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

impl RunConfig {
    /// Parse and validate a configuration file's contents.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<(String, usize)> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let n = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::at(n, format!("expected `key = value`, found `{content}`")))?;
            let key = key.trim();
            if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
                return Err(ConfigError::at(n, format!("duplicate key `{key}` (first set on line {first})")));
            }
            cfg.set(n, key, value.trim())?;
            seen.push((key.to_string(), n));
        }
        cfg.validate_lines(&seen)?;
        Ok(cfg)
    }

    /// Apply a single `key=value` override, e.g. from the command line.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::global(format!("override `{assignment}` is not `key=value`")))?;
        let key = key.trim();
        self.set(0, key, value.trim()).map_err(|e| ConfigError {
            line: None,
            message: format!("override: {}", e.message),
        })?;
        self.validate().map_err(|e| ConfigError {
            line: None,
            message: format!("override `{key}`: {}", e.message),
        })
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "theta1" => self.theta1 = parse_scalar(line, key, value)?,
            "theta2" => self.theta2 = parse_scalar(line, key, value)?,
            "u_correct" => self.u_correct = parse_scalar(line, key, value)?,
            "u_wrong" => self.u_wrong = parse_scalar(line, key, value)?,
            "cost" => self.cost = parse_scalar(line, key, value)?,
            "costs" => self.costs = parse_list(line, key, value)?,
            "priors" => self.priors = parse_list(line, key, value)?,
            "subjective_p" => {
                self.subjective_p = match value {
                    "" | "none" => None,
                    v => Some(parse_scalar(line, key, v)?),
                }
            }
            "seed" => self.seed = parse_scalar(line, key, value)?,
            "grid" => self.grid = parse_scalar(line, key, value)?,
            "draws" => self.draws = parse_scalar(line, key, value)?,
            other => {
                return Err(ConfigError::at(
                    line,
                    format!("unknown key `{other}` (expected one of: {})", KEYS.join(", ")),
                ))
            }
        }
        Ok(())
    }

    /// Re-validate every field against the model's constraints.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_lines(&[])
    }

    fn validate_lines(&self, seen: &[(String, usize)]) -> Result<(), ConfigError> {
        let line_of = |key: &str| seen.iter().find(|(k, _)| k == key).map(|(_, n)| *n);
        let fail = |key: &str, msg: String| ConfigError {
            line: line_of(key),
            message: msg,
        };
        let model = |key: &str, e: ModelError| fail(key, format!("`{key}`: {e}"));

        InformationStructure::new(self.theta1, self.theta2).map_err(|e| {
            let key = match e {
                ModelError::InvalidPrecision { name: "theta1", .. } => "theta1",
                _ => "theta2",
            };
            model(key, e)
        })?;
        PayoffStructure::new(self.u_correct, self.u_wrong).map_err(|e| {
            let key = if line_of("u_correct").is_some() { "u_correct" } else { "u_wrong" };
            model(key, e)
        })?;
        let info = self.info();
        let pay = self.payoffs();
        Environment::new(info, pay, self.cost).map_err(|e| model("cost", e))?;
        for &c in &self.costs {
            Environment::new(info, pay, c).map_err(|e| model("costs", e))?;
        }
        Scenario::new(info, pay, self.cost, &self.priors).map_err(|e| model("priors", e))?;
        if let Some(p) = self.subjective_p {
            if !(0.0..=1.0).contains(&p) {
                return Err(fail("subjective_p", format!("`subjective_p`: {p} is not a probability")));
            }
        }
        if self.grid < 2 {
            return Err(fail("grid", "`grid`: need at least 2 points".into()));
        }
        if self.draws == 0 {
            return Err(fail("draws", "`draws`: must be positive".into()));
        }
        Ok(())
    }

    /// Canonical text form; [`RunConfig::parse`] recovers an identical value.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("theta1", self.theta1.to_string());
        put("theta2", self.theta2.to_string());
        put("u_correct", self.u_correct.to_string());
        put("u_wrong", self.u_wrong.to_string());
        put("cost", self.cost.to_string());
        put("costs", join(&self.costs));
        put("priors", join(&self.priors));
        put(
            "subjective_p",
            self.subjective_p.map_or_else(|| "none".to_string(), |p| p.to_string()),
        );
        put("seed", self.seed.to_string());
        put("grid", self.grid.to_string());
        put("draws", self.draws.to_string());
        out
    }

    pub fn info(&self) -> InformationStructure {
        InformationStructure::new(self.theta1, self.theta2).expect("validated configuration")
    }

    pub fn payoffs(&self) -> PayoffStructure {
        PayoffStructure::new(self.u_correct, self.u_wrong).expect("validated configuration")
    }

    pub fn environment(&self) -> Environment {
        Environment::new(self.info(), self.payoffs(), self.cost).expect("validated configuration")
    }

    pub fn scenario(&self) -> Scenario {
        Scenario::new(self.info(), self.payoffs(), self.cost, &self.priors).expect("validated configuration")
    }

    /// Evenly spaced priors `k / (grid − 1)` over `[0, 1]`.
    pub fn prior_grid(&self) -> Vec<f64> {
        let n = self.grid.max(2);
        (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
    }
}
