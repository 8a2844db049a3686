// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! Randomized Mandelstam-Tamm campaigns.
//!
//! States have independent standard Gaussian real and imaginary parts and
//! are then normalized. Hamiltonians are `(M + M^dagger) / 2` for such a
//! Gaussian `M`. Trial `k` draws from a ChaCha8 generator seeded with the
//! campaign seed on stream `k`, so a trial's inputs do not depend on how
//! many workers run or in what order they finish.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use fsqd_core::{
    mt_scan, sample_trajectory, CMatrix, Complex64, HermitianOperator, PhysicalConstants,
    StateVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::pretty;
use crate::report::OutputFormat;

/// Grid points per trial.
pub const GRID_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignMode {
    /// Gaussian state and Hamiltonian.
    #[default]
    Random,
    /// Equal-weight superposition of two eigenstates of a Gaussian
    /// Hamiltonian, which saturates the bound.
    Geodesic,
    /// A single eigenstate of a Gaussian Hamiltonian.
    Eigenstate,
}

impl FromStr for CampaignMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(CampaignMode::Random),
            "geodesic" => Ok(CampaignMode::Geodesic),
            "eigenstate" => Ok(CampaignMode::Eigenstate),
            other => Err(format!("unknown mode `{other}`, expected random, geodesic or eigenstate")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSpec {
    pub dims: RangeInclusive<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub mode: CampaignMode,
    pub constants: PhysicalConstants,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub dim: usize,
    pub delta_h: f64,
    /// End of the scanned window, `pi hbar / (2 Delta H)` or 1 for a
    /// stationary state.
    pub window: f64,
    pub violations: usize,
    /// Smallest `|A_t| - cos(t Delta H / hbar)` on the grid.
    pub min_slack: f64,
    pub min_slack_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub seed: u64,
    pub tol: f64,
    pub mode: CampaignMode,
    pub trials: Vec<TrialResult>,
}

impl CampaignSummary {
    pub fn violation_count(&self) -> usize {
        self.trials.iter().map(|t| t.violations).sum()
    }

    /// The trial with the smallest slack.
    pub fn min_slack(&self) -> Option<&TrialResult> {
        self.trials.iter().min_by(|a, b| a.min_slack.total_cmp(&b.min_slack))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    #[error("{0}")]
    Spec(String),
    #[error("trial {trial}: {source}")]
    Trial { trial: usize, source: fsqd_core::Error },
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> Result<StateVector, fsqd_core::Error> {
    StateVector::normalized((0..dim).map(|_| gaussian_complex(rng)).collect())
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> Result<HermitianOperator, fsqd_core::Error> {
    let m = CMatrix::from_fn(dim, |_, _| gaussian_complex(rng));
    HermitianOperator::new(m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0)))
}

/// Equal-weight superposition of eigenstates `j != k` of `h` with a random
/// relative phase.
pub fn geodesic_state(rng: &mut impl Rng, h: &HermitianOperator) -> Result<StateVector, fsqd_core::Error> {
    let n = h.dim();
    let j = rng.gen_range(0..n);
    let k = (j + rng.gen_range(1..n)) % n;
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let (a, b) = (h.eigenvector(j), h.eigenvector(k));
    StateVector::normalized(
        a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x + phase * y).collect(),
    )
}

/// Inputs of one trial, reproducible from `(seed, trial)` alone.
pub fn trial_inputs(
    spec: &CampaignSpec,
    trial: usize,
) -> Result<(HermitianOperator, StateVector), fsqd_core::Error> {
    let mut rng = trial_rng(spec.seed, trial);
    let dim = rng.gen_range(spec.dims.clone());
    let h = random_hermitian(&mut rng, dim)?;
    let psi = match spec.mode {
        CampaignMode::Random => random_state(&mut rng, dim)?,
        CampaignMode::Geodesic => geodesic_state(&mut rng, &h)?,
        CampaignMode::Eigenstate => h.eigenvector(rng.gen_range(0..dim)),
    };
    Ok((h, psi))
}

pub fn run_trial(spec: &CampaignSpec, trial: usize) -> Result<TrialResult, fsqd_core::Error> {
    let (h, psi) = trial_inputs(spec, trial)?;
    let delta_h = fsqd_core::energy_uncertainty(&h, &psi)?;
    let scale = h.eigenvalues().iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    let window = if delta_h <= 1e-12 * scale {
        1.0
    } else {
        // cos(window * speed) would otherwise land a rounding error past pi/2
        FRAC_PI_2 * spec.constants.hbar() / delta_h * (1.0 - f64::EPSILON)
    };
    let trajectory = sample_trajectory(&psi, &h, window, GRID_POINTS - 1, spec.constants)?;
    let scan = mt_scan(&trajectory, &h, spec.constants, spec.tol)?;
    let (index, min_slack) = scan.min_slack.unwrap_or((0, 0.0));
    Ok(TrialResult {
        trial,
        dim: h.dim(),
        delta_h,
        window,
        violations: scan.violations.len(),
        min_slack,
        min_slack_t: trajectory.times()[index],
    })
}

pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignSummary, CampaignError> {
    if spec.trials == 0 {
        return Err(CampaignError::Spec("trials must be at least 1".into()));
    }
    if *spec.dims.start() < 2 || spec.dims.is_empty() {
        return Err(CampaignError::Spec(format!(
            "dimension range {}..{} must be nonempty and start at 2 or more",
            spec.dims.start(),
            spec.dims.end()
        )));
    }
    if !(spec.tol > 0.0 && spec.tol.is_finite()) {
        return Err(CampaignError::Spec(format!("tolerance must be positive, found {}", spec.tol)));
    }
    // indexed collect keeps trial order regardless of scheduling
    let trials = (0..spec.trials)
        .into_par_iter()
        .map(|k| run_trial(spec, k).map_err(|source| CampaignError::Trial { trial: k, source }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CampaignSummary { seed: spec.seed, tol: spec.tol, mode: spec.mode, trials })
}

pub fn serialize_campaign(summary: &CampaignSummary, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("trial,dim,delta_h,window,violations,min_slack,min_slack_t\n");
            for t in &summary.trials {
                writeln!(
                    out,
                    "{},{},{:.16e},{:.16e},{},{:.16e},{:.16e}",
                    t.trial, t.dim, t.delta_h, t.window, t.violations, t.min_slack, t.min_slack_t
                )
                .expect("writing to a String cannot fail");
            }
            out
        }
        OutputFormat::Json => {
            pretty(&serde_json::to_value(summary).expect("campaign summaries always serialize"))
        }
    }
}
