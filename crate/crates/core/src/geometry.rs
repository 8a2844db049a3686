// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! Fubini-Study distance between rays and arc length along trajectories.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::{HamiltonianSchedule, Trajectory};
use crate::error::{Error, Result};
use crate::operator::{energy_uncertainty, HermitianOperator, PhysicalConstants};
use crate::state::{dot, norm_of, normalize, Ray, StateVector};

/// Arc length of a sampled trajectory compared with the geodesic distance
/// between its endpoints, all in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathLengthResult {
    pub length: f64,
    pub endpoint_distance: f64,
    /// `length - endpoint_distance`; nonnegative up to quadrature error.
    pub deficit: f64,
}

/// Fubini-Study distance `x` with `cos^2 x = |<a|b>|^2 / (<a|a><b|b>)`.
///
/// The result lies in `[0, pi/2]`. It is evaluated as
/// `atan2(|b - a<a|b>|, |<a|b>|)` on unit representatives, which keeps full
/// absolute precision for nearly coincident rays where `acos` of an overlap
/// close to one does not, and it is exactly symmetric in its arguments.
pub fn fs_distance(a: &Ray, b: &Ray) -> Result<f64> {
    distance_of_units(a.representative(), b.representative())
}

/// [`fs_distance`] on arbitrary nonzero representatives.
pub fn fs_distance_states(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    distance_of_units(&normalize(a)?, &normalize(b)?)
}

fn distance_of_units(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let (a, b) = (a.amplitudes(), b.amplitudes());
    let x = 0.5 * (one_sided_angle(a, b) + one_sided_angle(b, a));
    Ok(x.clamp(0.0, core::f64::consts::FRAC_PI_2))
}

fn one_sided_angle(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap = dot(a, b);
    let perp: Vec<Complex64> = b.iter().zip(a).map(|(bi, ai)| bi - ai * overlap).collect();
    libm::atan2(norm_of(&perp), overlap.norm())
}

/// Instantaneous Fubini-Study speed `dx/dt = Delta H / hbar`.
pub fn fs_rate(psi: &StateVector, h: &HermitianOperator, constants: PhysicalConstants) -> Result<f64> {
    Ok(energy_uncertainty(h, psi)? / constants.hbar())
}

/// Running trapezoidal integral of [`fs_rate`] over the trajectory grid,
/// with the Hamiltonian taken from `schedule` at each grid time. Entry `k`
/// is the integral from the first sample to sample `k`.
pub fn accumulated_path_length(
    trajectory: &Trajectory,
    schedule: &HamiltonianSchedule,
    constants: PhysicalConstants,
) -> Result<Vec<f64>> {
    let rates = trajectory
        .times()
        .iter()
        .zip(trajectory.states())
        .map(|(&t, psi)| fs_rate(psi, &*schedule.operator_at(t)?, constants))
        .collect::<Result<Vec<f64>>>()?;
    let times = trajectory.times();
    let mut acc = Vec::with_capacity(rates.len());
    let mut total = 0.0;
    acc.push(total);
    for k in 1..rates.len() {
        total += 0.5 * (times[k] - times[k - 1]) * (rates[k] + rates[k - 1]);
        acc.push(total);
    }
    Ok(acc)
}

/// Integrated Fubini-Study arc length along `trajectory` (composite
/// trapezoid on the trajectory's own grid) against the endpoint distance.
pub fn path_length(
    trajectory: &Trajectory,
    schedule: &HamiltonianSchedule,
    constants: PhysicalConstants,
) -> Result<PathLengthResult> {
    if trajectory.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: trajectory.len() });
    }
    if let Some(k) = trajectory.times().windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NonMonotonicGrid(k + 1));
    }
    let length = *accumulated_path_length(trajectory, schedule, constants)?
        .last()
        .expect("at least two samples");
    let endpoint_distance = fs_distance_states(trajectory.initial_state(), trajectory.final_state())?;
    Ok(PathLengthResult { length, endpoint_distance, deficit: length - endpoint_distance })
}
