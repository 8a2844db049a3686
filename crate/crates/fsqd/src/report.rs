// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON output for survival reports, decay-rate tables and
//! trajectories.
//!
//! CSV floats are written as `{:.16e}` (17 significant digits), which
//! round-trips any `f64`. JSON floats use the shortest representation that
//! parses back to the same bits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use fsqd_core::{SurvivalReport, Trajectory};
use serde_json::json;

use crate::error::FormatError;
use crate::format::{complex_array, pretty};

/// Column order of the survival report CSV.
pub const REPORT_CSV_HEADER: &str =
    "t,amp_abs,prob,predicted,predicted_in_domain,mt_bound,w_empirical,w_closed";

/// Column order of the decay-rate CSV.
pub const DECAY_CSV_HEADER: &str = "t,w_empirical,w_closed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}`, expected csv or json")),
        }
    }
}

fn num(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String cannot fail");
}

fn opt(out: &mut String, x: Option<f64>) {
    if let Some(x) = x {
        num(out, x);
    }
}

pub fn serialize_report(report: &SurvivalReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => report_csv(report),
        OutputFormat::Json => {
            pretty(&serde_json::to_value(report).expect("reports always serialize"))
        }
    }
}

fn report_csv(report: &SurvivalReport) -> String {
    let mut out = String::with_capacity(200 * (report.len() + 1));
    out.push_str(REPORT_CSV_HEADER);
    out.push('\n');
    for k in 0..report.len() {
        num(&mut out, report.times[k]);
        out.push(',');
        num(&mut out, report.amplitude_abs[k]);
        out.push(',');
        num(&mut out, report.probability[k]);
        out.push(',');
        opt(&mut out, report.predicted_abs[k]);
        out.push(',');
        out.push_str(if report.predicted_abs[k].is_some() { "true" } else { "false" });
        out.push(',');
        opt(&mut out, report.mt_bound[k]);
        out.push(',');
        opt(&mut out, report.decay_rate_empirical[k]);
        out.push(',');
        num(&mut out, report.decay_rate_closed[k]);
        out.push('\n');
    }
    out
}

pub fn parse_report_json(text: &str) -> Result<SurvivalReport, FormatError> {
    let report: SurvivalReport = serde_json::from_str(text)?;
    let n = report.times.len();
    let columns = [
        ("amplitude_abs", report.amplitude_abs.len()),
        ("probability", report.probability.len()),
        ("predicted_abs", report.predicted_abs.len()),
        ("mt_bound", report.mt_bound.len()),
        ("decay_rate_empirical", report.decay_rate_empirical.len()),
        ("decay_rate_closed", report.decay_rate_closed.len()),
    ];
    for (name, len) in columns {
        if len != n {
            return Err(FormatError::field(name, format!("has {len} entries, times has {n}")));
        }
    }
    Ok(report)
}

/// Decay rates only, as `t,w_empirical,w_closed` or the JSON equivalent.
pub fn serialize_decay_table(report: &SurvivalReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(80 * (report.len() + 1));
            out.push_str(DECAY_CSV_HEADER);
            out.push('\n');
            for k in 0..report.len() {
                num(&mut out, report.times[k]);
                out.push(',');
                opt(&mut out, report.decay_rate_empirical[k]);
                out.push(',');
                num(&mut out, report.decay_rate_closed[k]);
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => pretty(&json!({
            "hbar": report.hbar,
            "times": report.times,
            "w_empirical": report.decay_rate_empirical,
            "w_closed": report.decay_rate_closed,
            "max_discrepancy": report.max_rate_discrepancy(),
        })),
    }
}

/// Trajectory samples: CSV columns `t,re_0,im_0,...`; JSON with `times`,
/// `states` as `[re, im]` arrays and the evolution digest.
pub fn serialize_trajectory(trajectory: &Trajectory, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let dim = trajectory.dim();
            let mut out = String::from("t");
            for i in 0..dim {
                write!(out, ",re_{i},im_{i}").expect("writing to a String cannot fail");
            }
            out.push('\n');
            for (t, psi) in trajectory.times().iter().zip(trajectory.states()) {
                num(&mut out, *t);
                for z in psi.amplitudes() {
                    out.push(',');
                    num(&mut out, z.re);
                    out.push(',');
                    num(&mut out, z.im);
                }
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => pretty(&json!({
            "digest": trajectory.digest(),
            "times": trajectory.times(),
            "states": trajectory.states().iter()
                .map(|s| complex_array(s.amplitudes()))
                .collect::<Vec<_>>(),
        })),
    }
}

/// Writes `contents` to `path`, creating missing parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<(), FormatError> {
    let io = |source| FormatError::Io { path: path.to_owned(), source };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, contents).map_err(io)
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_owned(), source })
}
