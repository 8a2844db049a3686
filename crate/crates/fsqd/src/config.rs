// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration documents.
//!
//! ```json
//! {
//!   "hbar": 1.0,
//!   "t_end": 1.5707963267948966,
//!   "steps": 1024,
//!   "initial_state": "plus.state.json",
//!   "schedule": "flip.sched.json",
//!   "output": {"format": "csv", "path": "out/plus"},
//!   "seed": 42
//! }
//! ```
//!
//! `initial_state` and `schedule` (or `hamiltonian`, read as a constant
//! schedule) are either a path relative to the config file or an inline
//! document. `hbar` defaults to 1, `steps` to 1024, and a missing `t_end`
//! becomes the in-domain horizon `pi hbar / (2 Delta H)` of the initial
//! state.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use fsqd_core::{energy_uncertainty, HamiltonianSchedule, PhysicalConstants, StateVector};
use serde_json::{Map, Value};

use crate::error::FormatError;
use crate::format::{number, parse_schedule, parse_state, schedule_from_value, state_from_value};
use crate::report::{read_file, OutputFormat};

pub const DEFAULT_STEPS: usize = 1024;

/// Horizon used when `t_end` is omitted and the initial state is stationary.
pub const STATIONARY_T_END: f64 = 1.0;

/// Environment variable overriding the configured `hbar`.
pub const HBAR_ENV: &str = "FSQD_HBAR";

const KEYS: &[&str] =
    &["hbar", "t_end", "steps", "initial_state", "schedule", "hamiltonian", "output", "seed"];

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub format: OutputFormat,
    /// Path stem; artifacts append `.report.csv` and the like.
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub hbar: f64,
    /// `None` selects the in-domain horizon, see [`RunConfig::resolved_t_end`].
    pub t_end: Option<f64>,
    pub steps: usize,
    pub schedule: HamiltonianSchedule,
    pub initial_state: StateVector,
    pub output: OutputSpec,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let text = read_file(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base).map_err(|e| e.in_file(path))
    }

    /// Parses a config document; relative paths inside it resolve against
    /// `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, FormatError> {
        let value: Value = serde_json::from_str(text)?;
        let obj = value
            .as_object()
            .ok_or_else(|| FormatError::field("document", "expected an object"))?;
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(FormatError::field(k.as_str(), "unknown key"));
        }

        let hbar = match obj.get("hbar") {
            None => 1.0,
            Some(v) => positive(v, "hbar")?,
        };
        let t_end = obj.get("t_end").map(|v| positive(v, "t_end")).transpose()?;
        let steps = match obj.get("steps") {
            None => DEFAULT_STEPS,
            Some(v) => match v.as_u64() {
                Some(n) if n >= 1 => n as usize,
                _ => return Err(FormatError::field("steps", "expected a positive integer")),
            },
        };
        let seed = match obj.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                v.as_u64()
                    .ok_or_else(|| FormatError::field("seed", "expected a nonnegative integer"))?,
            ),
        };

        let initial_state = match obj.get("initial_state") {
            None => return Err(FormatError::field("initial_state", "missing")),
            Some(Value::String(p)) => {
                let p = base.join(p);
                parse_state(&read_file(&p)?).map_err(|e| e.in_file(p))?
            }
            Some(v) => state_from_value(v, "initial_state")?,
        };

        let (key, source) = match (obj.get("schedule"), obj.get("hamiltonian")) {
            (Some(_), Some(_)) => {
                return Err(FormatError::field("hamiltonian", "give either schedule or hamiltonian, not both"))
            }
            (Some(v), None) => ("schedule", v),
            (None, Some(v)) => ("hamiltonian", v),
            (None, None) => return Err(FormatError::field("schedule", "missing")),
        };
        let schedule = match source {
            Value::String(p) => {
                let p = base.join(p);
                parse_schedule(&read_file(&p)?).map_err(|e| e.in_file(p))?
            }
            v => schedule_from_value(v, key)?,
        };
        if schedule.dim() != initial_state.dim() {
            return Err(FormatError::field(
                "initial_state",
                format!("dimension {} does not match the {key} dimension {}", initial_state.dim(), schedule.dim()),
            ));
        }

        let output = match obj.get("output") {
            None => OutputSpec { format: OutputFormat::Csv, path: None },
            Some(v) => output_spec(v, base)?,
        };

        Ok(RunConfig { hbar, t_end, steps, schedule, initial_state, output, seed })
    }

    /// Replaces `hbar` with the value of [`HBAR_ENV`] when it is set.
    pub fn apply_env(&mut self) -> Result<(), FormatError> {
        if let Ok(raw) = std::env::var(HBAR_ENV) {
            self.hbar = parse_hbar(&raw)?;
        }
        Ok(())
    }

    pub fn constants(&self) -> Result<PhysicalConstants, FormatError> {
        PhysicalConstants::new(self.hbar).map_err(|e| FormatError::numeric("hbar", e))
    }

    /// `t_end`, or `pi hbar / (2 Delta H)` of the initial state under the
    /// Hamiltonian at `t = 0` when it was omitted.
    pub fn resolved_t_end(&self) -> Result<f64, FormatError> {
        if let Some(t) = self.t_end {
            return Ok(t);
        }
        let h = self.schedule.operator_at(0.0).map_err(|e| FormatError::numeric("schedule", e))?;
        let delta_h = energy_uncertainty(&h, &self.initial_state)
            .map_err(|e| FormatError::numeric("initial_state", e))?;
        let scale = h.eigenvalues().iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        if delta_h <= 1e-12 * scale.max(1.0) {
            Ok(STATIONARY_T_END)
        } else {
            Ok(FRAC_PI_2 * self.hbar / delta_h)
        }
    }
}

pub fn parse_hbar(raw: &str) -> Result<f64, FormatError> {
    match raw.trim().parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(FormatError::field(HBAR_ENV, format!("expected a positive number, found `{raw}`"))),
    }
}

fn positive(v: &Value, field: &str) -> Result<f64, FormatError> {
    let x = number(v, field)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(FormatError::field(field, format!("must be positive, found {x}")))
    }
}

fn output_spec(v: &Value, base: &Path) -> Result<OutputSpec, FormatError> {
    let obj: &Map<String, Value> =
        v.as_object().ok_or_else(|| FormatError::field("output", "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !["format", "path"].contains(&k.as_str())) {
        return Err(FormatError::field(format!("output.{k}"), "unknown key"));
    }
    let format = match obj.get("format") {
        None => OutputFormat::Csv,
        Some(f) => f
            .as_str()
            .ok_or_else(|| FormatError::field("output.format", "expected a string"))?
            .parse()
            .map_err(|m: String| FormatError::field("output.format", m))?,
    };
    let path = match obj.get("path") {
        None => None,
        Some(p) => Some(base.join(
            p.as_str().ok_or_else(|| FormatError::field("output.path", "expected a string"))?,
        )),
    };
    Ok(OutputSpec { format, path })
}
