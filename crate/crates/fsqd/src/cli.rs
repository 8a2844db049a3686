// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! The `fsqd` command line.
//!
//! Exit codes: 0 on success, 1 for usage, parse and I/O errors, 2 when a
//! numerical contract fails (a Mandelstam-Tamm violation, a non-Hermitian
//! Hamiltonian, norm drift during propagation).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fsqd_core::{
    build_survival_report, evolve_schedule, fs_distance_states, sample_trajectory,
    HamiltonianSchedule, PhysicalConstants, SurvivalReport, Trajectory,
};

use crate::campaign::{run_campaign, serialize_campaign, CampaignMode, CampaignSpec};
use crate::config::{parse_hbar, RunConfig, HBAR_ENV};
use crate::error::FormatError;
use crate::format::parse_state;
use crate::report::{
    read_file, serialize_decay_table, serialize_report, serialize_trajectory, write_file,
    OutputFormat,
};

#[derive(Debug, Parser)]
#[command(name = "fsqd", version, about = "Fubini-Study geometry and survival of pure quantum states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a state and write its trajectory and survival report
    Evolve(RunArgs),
    /// Fubini-Study distance between two state files, in radians
    FsDistance {
        #[arg(long, value_name = "PATH")]
        state_a: PathBuf,
        #[arg(long, value_name = "PATH")]
        state_b: PathBuf,
    },
    /// Check the Mandelstam-Tamm bound on random states and Hamiltonians
    MtCampaign(CampaignArgs),
    /// Compare measured and closed-form decay rates
    DecayRate(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Overrides the configured output format
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// Output path stem; overrides the configured one
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    /// Inclusive dimension range, `LO..HI` or a single dimension
    #[arg(long, value_parser = parse_dims, default_value = "2..8")]
    pub dims: RangeInclusive<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// random, geodesic or eigenstate
    #[arg(long, default_value = "random")]
    pub mode: CampaignMode,
    #[arg(long, default_value = "csv")]
    pub format: OutputFormat,
    /// Output path stem; nothing is written without it
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn parse_dims(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bound = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad dimension `{x}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (bound(lo)?, bound(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let d = bound(s)?;
            (d, d)
        }
    };
    if lo < 2 || hi < lo {
        return Err(format!("`{s}` must satisfy 2 <= LO <= HI"));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub summary: String,
    pub artifacts: Vec<PathBuf>,
}

impl CommandOutcome {
    fn ok(summary: String, artifacts: Vec<PathBuf>) -> Self {
        CommandOutcome { exit_code: 0, summary, artifacts }
    }

    fn usage(summary: impl Into<String>) -> Self {
        CommandOutcome { exit_code: 1, summary: summary.into(), artifacts: Vec::new() }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            CommandOutcome { exit_code: code, summary: e.render().to_string(), artifacts: Vec::new() }
        }
    }
}

pub fn execute(command: Command) -> CommandOutcome {
    let result = match command {
        Command::Evolve(args) => cmd_evolve(&args),
        Command::DecayRate(args) => cmd_decay_rate(&args),
        Command::FsDistance { state_a, state_b } => cmd_fs_distance(&state_a, &state_b),
        Command::MtCampaign(args) => cmd_mt_campaign(&args),
    };
    result.unwrap_or_else(|e| e)
}

/// Exit code for a failed load or computation.
fn exit_code_for(source: Option<&fsqd_core::Error>) -> i32 {
    match source {
        Some(fsqd_core::Error::NotHermitian { .. } | fsqd_core::Error::NormDrift { .. }) => 2,
        _ => 1,
    }
}

fn format_failure(e: FormatError) -> CommandOutcome {
    CommandOutcome { exit_code: exit_code_for(e.numeric_source()), summary: format!("error: {e}"), artifacts: Vec::new() }
}

fn core_failure(context: &str, e: fsqd_core::Error) -> CommandOutcome {
    CommandOutcome { exit_code: exit_code_for(Some(&e)), summary: format!("error: {context}: {e}"), artifacts: Vec::new() }
}

fn env_hbar() -> Result<Option<f64>, CommandOutcome> {
    match std::env::var(HBAR_ENV) {
        Ok(raw) => parse_hbar(&raw).map(Some).map_err(format_failure),
        Err(_) => Ok(None),
    }
}

struct Run {
    config: RunConfig,
    constants: PhysicalConstants,
    t_end: f64,
    trajectory: Trajectory,
    report: SurvivalReport,
    format: OutputFormat,
    stem: PathBuf,
}

fn prepare(args: &RunArgs) -> Result<Run, CommandOutcome> {
    let mut config = RunConfig::load(&args.config).map_err(format_failure)?;
    config.apply_env().map_err(format_failure)?;
    let constants = config.constants().map_err(format_failure)?;
    let t_end = config.resolved_t_end().map_err(format_failure)?;
    let trajectory = match config.schedule.constant_operator() {
        Some(h) => sample_trajectory(&config.initial_state, h, t_end, config.steps, constants),
        None => evolve_schedule(&config.initial_state, &config.schedule, t_end, config.steps, constants),
    }
    .map_err(|e| core_failure("evolution", e))?;
    let report = build_survival_report(&trajectory, &config.schedule, constants)
        .map_err(|e| core_failure("survival report", e))?;
    let format = args.format.unwrap_or(config.output.format);
    let stem = args
        .out
        .clone()
        .or_else(|| config.output.path.clone())
        .unwrap_or_else(|| args.config.with_extension(""));
    Ok(Run { config, constants, t_end, trajectory, report, format, stem })
}

fn artifact(stem: &Path, kind: &str, format: OutputFormat) -> PathBuf {
    let mut name = stem.as_os_str().to_owned();
    name.push(format!(".{kind}.{}", format.extension()));
    PathBuf::from(name)
}

fn write_artifact(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CommandOutcome> {
    write_file(&path, contents).map_err(|e| CommandOutcome {
        exit_code: 1,
        summary: format!("error: {e}"),
        artifacts: written.clone(),
    })?;
    log::info!("wrote {}", path.display());
    written.push(path);
    Ok(())
}

fn describe_schedule(schedule: &HamiltonianSchedule) -> &'static str {
    match schedule.kind() {
        fsqd_core::ScheduleKind::Constant => "constant Hamiltonian",
        fsqd_core::ScheduleKind::PiecewiseConstant => "piecewise-constant schedule",
        fsqd_core::ScheduleKind::Sampled => "sampled schedule",
    }
}

fn header(run: &Run) -> String {
    let delta_h = run.report.initial_uncertainty;
    let hbar = run.constants.hbar();
    let mut s = format!(
        "{} points on [0, {:.12e}] under a {} (hbar = {hbar}).\n",
        run.trajectory.len(),
        run.t_end,
        describe_schedule(&run.config.schedule),
    );
    let _ = writeln!(s, "Delta H = {delta_h:.12e}");
    let _ = writeln!(s, "v_d = Delta H / hbar = {:.12e}", delta_h / hbar);
    if delta_h > 0.0 {
        let _ = writeln!(s, "in-domain horizon pi hbar / (2 Delta H) = {:.12e}", std::f64::consts::FRAC_PI_2 * hbar / delta_h);
    } else {
        let _ = writeln!(s, "in-domain horizon: unbounded (stationary state)");
    }
    let digest = run.trajectory.digest();
    if digest.renormalizations > 0 {
        let _ = writeln!(
            s,
            "{} of {} steps renormalized, max norm drift {:e}",
            digest.renormalizations, digest.steps, digest.max_norm_drift
        );
    }
    s
}

pub fn cmd_evolve(args: &RunArgs) -> Result<CommandOutcome, CommandOutcome> {
    let run = prepare(args)?;
    let mut written = Vec::new();
    write_artifact(artifact(&run.stem, "trajectory", run.format), &serialize_trajectory(&run.trajectory, run.format), &mut written)?;
    write_artifact(artifact(&run.stem, "report", run.format), &serialize_report(&run.report, run.format), &mut written)?;

    let mut summary = header(&run);
    match run.report.max_prediction_gap() {
        Some((k, gap)) => {
            let _ = writeln!(
                summary,
                "max |measured - predicted| = {:.6e} at t = {:.12e} ({})",
                gap.abs(),
                run.report.times[k],
                if gap > 0.0 { "prediction below measurement" } else if gap < 0.0 { "prediction above measurement" } else { "exact" }
            );
        }
        None => {
            let _ = writeln!(summary, "no in-domain points to compare");
        }
    }
    let violations = run.report.violations.as_ref().map_or(0, Vec::len);
    match &run.report.violations {
        Some(v) => {
            let _ = writeln!(summary, "Mandelstam-Tamm violations: {}", v.len());
        }
        None => {
            let _ = writeln!(summary, "Mandelstam-Tamm check skipped (time-dependent schedule)");
        }
    }
    let exit_code = if violations > 0 { 2 } else { 0 };
    Ok(CommandOutcome { exit_code, summary, artifacts: written })
}

pub fn cmd_decay_rate(args: &RunArgs) -> Result<CommandOutcome, CommandOutcome> {
    let run = prepare(args)?;
    let mut written = Vec::new();
    write_artifact(artifact(&run.stem, "decay", run.format), &serialize_decay_table(&run.report, run.format), &mut written)?;
    let mut summary = header(&run);
    match run.report.max_rate_discrepancy() {
        Some(d) => {
            let _ = writeln!(summary, "max |w_empirical - w_closed| = {d:.6e}");
        }
        None => {
            let _ = writeln!(summary, "fewer than three points, no empirical rate");
        }
    }
    Ok(CommandOutcome::ok(summary, written))
}

pub fn cmd_fs_distance(a: &Path, b: &Path) -> Result<CommandOutcome, CommandOutcome> {
    let load = |p: &Path| {
        read_file(p)
            .and_then(|t| parse_state(&t).map_err(|e| e.in_file(p)))
            .map_err(format_failure)
    };
    let (a, b) = (load(a)?, load(b)?);
    let x = fs_distance_states(&a, &b).map_err(|e| core_failure("fs-distance", e))?;
    Ok(CommandOutcome::ok(format!("{x:.12}\n"), Vec::new()))
}

pub fn cmd_mt_campaign(args: &CampaignArgs) -> Result<CommandOutcome, CommandOutcome> {
    let hbar = env_hbar()?.unwrap_or(1.0);
    let constants = PhysicalConstants::new(hbar).map_err(|e| core_failure("hbar", e))?;
    let spec = CampaignSpec {
        dims: args.dims.clone(),
        trials: args.trials,
        seed: args.seed,
        tol: args.tol,
        mode: args.mode,
        constants,
    };
    let summary = run_campaign(&spec).map_err(|e| match e {
        crate::campaign::CampaignError::Trial { ref source, .. } => {
            CommandOutcome { exit_code: exit_code_for(Some(source)), summary: format!("error: {e}"), artifacts: Vec::new() }
        }
        _ => CommandOutcome::usage(format!("error: {e}")),
    })?;

    let mut written = Vec::new();
    if let Some(stem) = &args.out {
        write_artifact(artifact(stem, "campaign", args.format), &serialize_campaign(&summary, args.format), &mut written)?;
    }
    let violations = summary.violation_count();
    let mut text = format!(
        "{} trials, dims {}..{}, seed {}, tol {:e}\nviolations: {violations}\n",
        args.trials,
        args.dims.start(),
        args.dims.end(),
        args.seed,
        args.tol,
    );
    if let Some(t) = summary.min_slack() {
        let _ = writeln!(
            text,
            "minimum slack {:.6e} (trial {}, dim {}, t = {:.6e})",
            t.min_slack, t.trial, t.dim, t.min_slack_t
        );
    }
    Ok(CommandOutcome { exit_code: if violations > 0 { 2 } else { 0 }, summary: text, artifacts: written })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_values() {
        assert_eq!(parse_dims("2..8").unwrap(), 2..=8);
        assert_eq!(parse_dims("2..=8").unwrap(), 2..=8);
        assert_eq!(parse_dims("4").unwrap(), 4..=4);
        for bad in ["1..3", "5..3", "a..3", "", "2..", "..3"] {
            assert!(parse_dims(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["fsqd"]).exit_code, 1);
        assert_eq!(run(["fsqd", "frobnicate"]).exit_code, 1);
        assert_eq!(run(["fsqd", "mt-campaign", "--dims", "1..2"]).exit_code, 1);
        assert_eq!(run(["fsqd", "mt-campaign", "--format", "xml"]).exit_code, 1);
        assert_eq!(run(["fsqd", "mt-campaign", "--trials", "0"]).exit_code, 1);
        assert_eq!(run(["fsqd", "--help"]).exit_code, 0);
    }

    #[test]
    fn eigenstate_campaign_summary() {
        let out = run(["fsqd", "mt-campaign", "--trials", "1", "--dims", "2", "--mode", "eigenstate"]);
        assert_eq!(out.exit_code, 0, "{}", out.summary);
        assert!(out.summary.contains("violations: 0"), "{}", out.summary);
        assert!(out.artifacts.is_empty());
    }

    #[test]
    fn artifact_names() {
        assert_eq!(
            artifact(Path::new("out/run"), "report", OutputFormat::Csv),
            PathBuf::from("out/run.report.csv")
        );
        assert_eq!(
            artifact(Path::new("run.v2"), "decay", OutputFormat::Json),
            PathBuf::from("run.v2.decay.json")
        );
    }
}
