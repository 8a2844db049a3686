// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! Survival amplitude, the cosine survival prediction, the Mandelstam-Tamm
//! bound and decay rates.
//!
//! The cosine prediction `|A_t| = cos(int_0^t Delta H / hbar dt)` is
//! exposed next to the measured `|A_t|` rather than assumed: it holds with
//! equality only along geodesic evolutions (equal-weight superpositions of
//! two energy eigenstates) and is a strict lower bound otherwise. Once the
//! accumulated angle passes `pi/2` the cosine turns negative while `|A_t|`
//! cannot, so those points are reported as out of domain.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::dynamics::{HamiltonianSchedule, ScheduleKind, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::{accumulated_path_length, fs_rate};
use crate::operator::{energy_uncertainty, HermitianOperator, PhysicalConstants};
use crate::state::{dot, StateVector};

/// Mandelstam-Tamm check tolerance for exactly propagated trajectories.
pub const MT_TOLERANCE_EXACT: f64 = 1e-9;
/// Mandelstam-Tamm check tolerance for stepped, non-constant schedules.
pub const MT_TOLERANCE_STEPPED: f64 = 1e-7;

/// A grid point where `|A_t|` falls below the Mandelstam-Tamm bound by more
/// than the tolerance; `magnitude = bound - |A_t|`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub index: usize,
    pub magnitude: f64,
}

/// Cosine-law prediction at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// Accumulated `int Delta H / hbar dt` up to this point.
    pub integral: f64,
    pub value: f64,
    /// `integral <= pi/2`.
    pub in_domain: bool,
}

impl Prediction {
    pub fn amplitude(&self) -> Option<f64> {
        self.in_domain.then_some(self.value)
    }
}

/// Outcome of scanning a trajectory against the Mandelstam-Tamm bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MtScan {
    /// `Delta H` in the initial state.
    pub delta_h: f64,
    pub violations: Vec<Violation>,
    /// Smallest `|A_t| - cos(t Delta H / hbar)` over in-domain points and
    /// where it occurs.
    pub min_slack: Option<(usize, f64)>,
}

/// `A_k = <psi(t_0)|psi(t_k)>` on unit representatives.
pub fn survival_amplitude(trajectory: &Trajectory) -> Result<Vec<Complex64>> {
    if trajectory.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let psi0 = trajectory.initial_state();
    let n0 = psi0.norm();
    Ok(trajectory
        .states()
        .iter()
        .map(|s| dot(psi0.amplitudes(), s.amplitudes()) / (n0 * s.norm()))
        .collect())
}

/// `cos` of the accumulated Fubini-Study arc length at every grid point.
pub fn predicted_amplitude(
    trajectory: &Trajectory,
    schedule: &HamiltonianSchedule,
    constants: PhysicalConstants,
) -> Result<Vec<Prediction>> {
    Ok(accumulated_path_length(trajectory, schedule, constants)?
        .into_iter()
        .map(|integral| Prediction {
            integral,
            value: libm::cos(integral),
            in_domain: integral <= FRAC_PI_2,
        })
        .collect())
}

/// Compares `|A_t|` with `cos(t Delta H / hbar)` wherever
/// `t Delta H / hbar <= pi/2`, with `Delta H` taken in the initial state and
/// `t` measured from the first sample.
pub fn mt_scan(
    trajectory: &Trajectory,
    h: &HermitianOperator,
    constants: PhysicalConstants,
    tol: f64,
) -> Result<MtScan> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let amplitudes = survival_amplitude(trajectory)?;
    let delta_h = energy_uncertainty(h, trajectory.initial_state())?;
    let speed = delta_h / constants.hbar();
    let t0 = trajectory.times()[0];

    let mut violations = Vec::new();
    let mut min_slack: Option<(usize, f64)> = None;
    for (index, (&t, a)) in trajectory.times().iter().zip(&amplitudes).enumerate() {
        let angle = (t - t0) * speed;
        if angle > FRAC_PI_2 {
            continue;
        }
        let slack = a.norm() - libm::cos(angle);
        if min_slack.is_none_or(|(_, m)| slack < m) {
            min_slack = Some((index, slack));
        }
        if slack < -tol {
            violations.push(Violation { index, magnitude: -slack });
        }
    }
    Ok(MtScan { delta_h, violations, min_slack })
}

/// Grid points violating `|A_t| >= cos(t Delta H / hbar) - tol`. Empty for
/// correct unitary dynamics under a constant Hamiltonian.
pub fn mt_check(
    trajectory: &Trajectory,
    h: &HermitianOperator,
    constants: PhysicalConstants,
    tol: f64,
) -> Result<Vec<Violation>> {
    Ok(mt_scan(trajectory, h, constants, tol)?.violations)
}

/// Decay velocity `v_d = Delta H / hbar`; the same quantity as
/// [`fs_rate`].
pub fn decay_velocity(
    psi: &StateVector,
    h: &HermitianOperator,
    constants: PhysicalConstants,
) -> Result<f64> {
    fs_rate(psi, h, constants)
}

/// `w = d/dt (1 - P)` by finite differences on a uniform grid: central
/// differences inside, second-order one-sided stencils at both ends.
pub fn decay_rate_empirical(times: &[f64], probability: &[f64]) -> Result<Vec<f64>> {
    let n = times.len();
    if probability.len() != n {
        return Err(Error::LengthMismatch { times: n, states: probability.len() });
    }
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    let h = (times[n - 1] - times[0]) / (n - 1) as f64;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonMonotonicGrid(1));
    }
    for k in 1..n {
        let dt = times[k] - times[k - 1];
        if !(dt > 0.0) {
            return Err(Error::NonMonotonicGrid(k));
        }
        if libm::fabs(dt - h) > 1e-9 * h {
            return Err(Error::NonUniformGrid(k));
        }
    }
    let p = probability;
    let mut w = Vec::with_capacity(n);
    w.push(-(-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * h));
    for k in 1..n - 1 {
        w.push(-(p[k + 1] - p[k - 1]) / (2.0 * h));
    }
    w.push(-(3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) / (2.0 * h));
    Ok(w)
}

/// Decay rate implied by the cosine survival law:
/// `sin(2 t Delta H / hbar) Delta H / hbar`, or with an accumulated angle
/// `I = int Delta H / hbar dt`, `sin(2 I) Delta H / hbar`.
pub fn decay_rate_closed(
    t: f64,
    delta_h: f64,
    constants: PhysicalConstants,
    accumulated_integral: Option<f64>,
) -> Result<f64> {
    if !(delta_h >= 0.0) || !delta_h.is_finite() {
        return Err(Error::invalid("delta_h", "must be nonnegative and finite"));
    }
    if !t.is_finite() {
        return Err(Error::invalid("t", "must be finite"));
    }
    let rate = delta_h / constants.hbar();
    let angle = match accumulated_integral {
        Some(i) if !(i >= 0.0) || !i.is_finite() => {
            return Err(Error::invalid("accumulated_integral", "must be nonnegative and finite"))
        }
        Some(i) => i,
        None => t * rate,
    };
    Ok(libm::sin(2.0 * angle) * rate)
}

/// Per-time-point survival record of one trajectory.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurvivalReport {
    pub hbar: f64,
    /// `Delta H` of the initial state under the initial Hamiltonian.
    pub initial_uncertainty: f64,
    pub times: Vec<f64>,
    pub amplitude_abs: Vec<f64>,
    pub probability: Vec<f64>,
    /// Cosine prediction, `None` out of domain.
    pub predicted_abs: Vec<Option<f64>>,
    /// `cos(t Delta H / hbar)`, `None` once the angle exceeds `pi/2`.
    pub mt_bound: Vec<Option<f64>>,
    /// `None` everywhere when the grid has fewer than three points.
    pub decay_rate_empirical: Vec<Option<f64>>,
    pub decay_rate_closed: Vec<f64>,
    /// Mandelstam-Tamm violations; only checked for constant schedules.
    pub violations: Option<Vec<Violation>>,
}

impl SurvivalReport {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest in-domain `|A_t| - prediction` together with its index;
    /// positive values mean the prediction sits below the measurement.
    pub fn max_prediction_gap(&self) -> Option<(usize, f64)> {
        self.amplitude_abs
            .iter()
            .zip(&self.predicted_abs)
            .enumerate()
            .filter_map(|(k, (a, p))| p.map(|p| (k, a - p)))
            .max_by(|x, y| libm::fabs(x.1).total_cmp(&libm::fabs(y.1)))
    }

    /// Largest `|w_empirical - w_closed|` over points where both exist.
    pub fn max_rate_discrepancy(&self) -> Option<f64> {
        self.decay_rate_empirical
            .iter()
            .zip(&self.decay_rate_closed)
            .filter_map(|(e, c)| e.map(|e| libm::fabs(e - c)))
            .reduce(f64::max)
    }
}

/// Assembles every survival observable for `trajectory`, which must have
/// been produced under `schedule`.
pub fn build_survival_report(
    trajectory: &Trajectory,
    schedule: &HamiltonianSchedule,
    constants: PhysicalConstants,
) -> Result<SurvivalReport> {
    let times = trajectory.times().to_vec();
    let t0 = times[0];
    let amplitude_abs: Vec<f64> =
        survival_amplitude(trajectory)?.iter().map(|a| a.norm()).collect();
    let probability: Vec<f64> = amplitude_abs.iter().map(|a| a * a).collect();
    let predictions = predicted_amplitude(trajectory, schedule, constants)?;

    let initial_h = schedule.operator_at(t0)?;
    let initial_uncertainty = energy_uncertainty(&initial_h, trajectory.initial_state())?;
    let speed = initial_uncertainty / constants.hbar();
    let mt_bound = times
        .iter()
        .map(|&t| {
            let angle = (t - t0) * speed;
            (angle <= FRAC_PI_2).then(|| libm::cos(angle))
        })
        .collect();

    let decay_rate_empirical = if times.len() >= 3 {
        decay_rate_empirical(&times, &probability)?.into_iter().map(Some).collect()
    } else {
        alloc::vec![None; times.len()]
    };

    let decay_rate_closed = match schedule.constant_operator() {
        Some(_) => times
            .iter()
            .map(|&t| decay_rate_closed(t - t0, initial_uncertainty, constants, None))
            .collect::<Result<Vec<_>>>()?,
        // prefactor Delta H evaluated at the current time
        None => times
            .iter()
            .zip(trajectory.states())
            .zip(&predictions)
            .map(|((&t, psi), p)| {
                let delta_h = energy_uncertainty(&*schedule.operator_at(t)?, psi)?;
                decay_rate_closed(t - t0, delta_h, constants, Some(p.integral))
            })
            .collect::<Result<Vec<_>>>()?,
    };

    let violations = match (schedule.kind(), schedule.constant_operator()) {
        (ScheduleKind::Constant, Some(h)) => {
            Some(mt_check(trajectory, h, constants, MT_TOLERANCE_EXACT)?)
        }
        _ => None,
    };

    Ok(SurvivalReport {
        hbar: constants.hbar(),
        initial_uncertainty,
        times,
        amplitude_abs,
        probability,
        predicted_abs: predictions.iter().map(Prediction::amplitude).collect(),
        mt_bound,
        decay_rate_empirical,
        decay_rate_closed,
        violations,
    })
}
