// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! Unitary time evolution of pure states.
//!
//! Time-independent Hamiltonians are propagated exactly through their
//! spectral decomposition. Time-dependent schedules are stepped on a uniform
//! grid: piecewise-constant schedules are integrated exactly segment by
//! segment, sampled schedules freeze the Hamiltonian at each step midpoint
//! (first-order Magnus, second-order accurate and unitary per step).

use alloc::borrow::Cow;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{HermitianOperator, PhysicalConstants};
use crate::state::{dot, norm_of, StateVector};

/// Largest per-step norm drift that stepping silently renormalizes away.
pub const RENORMALIZATION_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ScheduleKind {
    Constant,
    PiecewiseConstant,
    Sampled,
}

/// Hamiltonian as a function of time.
///
/// * constant: one operator for all times;
/// * piecewise constant: `(t_start, H)` breakpoints, each operator active
///   from its start up to the next breakpoint, the last one indefinitely;
/// * sampled: `(t, H)` nodes with linear interpolation between neighbours,
///   defined on `[t_first, t_last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSchedule {
    kind: ScheduleKind,
    nodes: Vec<(f64, HermitianOperator)>,
}

impl HamiltonianSchedule {
    pub fn constant(h: HermitianOperator) -> Self {
        Self { kind: ScheduleKind::Constant, nodes: alloc::vec![(0.0, h)] }
    }

    pub fn piecewise_constant(segments: Vec<(f64, HermitianOperator)>) -> Result<Self> {
        validate_nodes(&segments, 1)?;
        Ok(Self { kind: ScheduleKind::PiecewiseConstant, nodes: segments })
    }

    pub fn sampled(samples: Vec<(f64, HermitianOperator)>) -> Result<Self> {
        validate_nodes(&samples, 2)?;
        Ok(Self { kind: ScheduleKind::Sampled, nodes: samples })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.nodes[0].1.dim()
    }

    /// Breakpoints or samples; a constant schedule holds one node at `t = 0`.
    pub fn nodes(&self) -> &[(f64, HermitianOperator)] {
        &self.nodes
    }

    pub fn constant_operator(&self) -> Option<&HermitianOperator> {
        match self.kind {
            ScheduleKind::Constant => Some(&self.nodes[0].1),
            _ => None,
        }
    }

    /// The Hamiltonian in effect at `t`. Piecewise schedules are
    /// right-continuous at breakpoints.
    pub fn operator_at(&self, t: f64) -> Result<Cow<'_, HermitianOperator>> {
        match self.kind {
            ScheduleKind::Constant => Ok(Cow::Borrowed(&self.nodes[0].1)),
            ScheduleKind::PiecewiseConstant => {
                Ok(Cow::Borrowed(&self.nodes[self.segment_index(t)?].1))
            }
            ScheduleKind::Sampled => {
                let (first, last) = (self.nodes[0].0, self.nodes[self.nodes.len() - 1].0);
                if !(t >= first && t <= last) {
                    return Err(Error::ScheduleGap(t));
                }
                let k = self.nodes.partition_point(|(tk, _)| *tk <= t);
                if k == 0 {
                    return Err(Error::ScheduleGap(t));
                }
                let (t0, h0) = &self.nodes[k - 1];
                if *t0 == t || k == self.nodes.len() {
                    return Ok(Cow::Borrowed(h0));
                }
                let (t1, h1) = &self.nodes[k];
                let s = (t - t0) / (t1 - t0);
                Ok(Cow::Owned(HermitianOperator::interpolate(h0, h1, s)?))
            }
        }
    }

    /// Fails with [`Error::ScheduleGap`] unless `[start, end]` is covered.
    pub fn covers(&self, start: f64, end: f64) -> Result<()> {
        match self.kind {
            ScheduleKind::Constant => Ok(()),
            ScheduleKind::PiecewiseConstant => self.segment_index(start).map(|_| ()),
            ScheduleKind::Sampled => {
                if start < self.nodes[0].0 {
                    Err(Error::ScheduleGap(start))
                } else if end > self.nodes[self.nodes.len() - 1].0 {
                    Err(Error::ScheduleGap(end))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn segment_index(&self, t: f64) -> Result<usize> {
        match self.nodes.partition_point(|(tk, _)| *tk <= t) {
            0 => Err(Error::ScheduleGap(t)),
            k => Ok(k - 1),
        }
    }
}

fn validate_nodes(nodes: &[(f64, HermitianOperator)], min: usize) -> Result<()> {
    if nodes.len() < min {
        return Err(Error::TooFewSamples { needed: min, got: nodes.len() });
    }
    let dim = nodes[0].1.dim();
    for (k, (t, h)) in nodes.iter().enumerate() {
        if !t.is_finite() {
            return Err(Error::invalid("t", "schedule times must be finite"));
        }
        if h.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: h.dim() });
        }
        if k > 0 && !(*t > nodes[k - 1].0) {
            return Err(Error::ScheduleOrder(k));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EvolutionMethod {
    /// Every sample propagated directly from the initial state.
    Exact,
    /// Step-by-step propagation over the grid.
    Stepped,
}

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScheduleDigest {
    pub method: EvolutionMethod,
    pub kind: ScheduleKind,
    pub steps: usize,
    pub hbar: f64,
    /// Steps after which the state was rescaled to unit norm.
    pub renormalizations: usize,
    pub max_norm_drift: f64,
}

impl ScheduleDigest {
    pub fn exact(steps: usize, constants: PhysicalConstants) -> Self {
        Self {
            method: EvolutionMethod::Exact,
            kind: ScheduleKind::Constant,
            steps,
            hbar: constants.hbar(),
            renormalizations: 0,
            max_norm_drift: 0.0,
        }
    }
}

/// Time-ordered samples `(t_k, psi(t_k))` of an evolution run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<StateVector>,
    digest: ScheduleDigest,
}

impl Trajectory {
    /// Checks lengths, a strictly ascending finite grid, a common dimension
    /// and normalization of every state.
    pub fn new(times: Vec<f64>, states: Vec<StateVector>, digest: ScheduleDigest) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::LengthMismatch { times: times.len(), states: states.len() });
        }
        if times.is_empty() {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        if let Some(k) = times.iter().position(|t| !t.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        if let Some(k) = times.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::NonMonotonicGrid(k + 1));
        }
        let dim = states[0].dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: s.dim() });
            }
            s.ensure_normalized()?;
        }
        Ok(Self { times, states, digest })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn digest(&self) -> &ScheduleDigest {
        &self.digest
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn final_state(&self) -> &StateVector {
        &self.states[self.states.len() - 1]
    }
}

/// `exp(-i H t / hbar) psi0` via `V exp(-i Lambda t / hbar) V^dagger psi0`.
pub fn evolve_exact(
    psi0: &StateVector,
    h: &HermitianOperator,
    t: f64,
    constants: PhysicalConstants,
) -> Result<StateVector> {
    check_inputs(psi0, h.dim())?;
    if !t.is_finite() {
        return Err(Error::invalid("t", "must be finite"));
    }
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    Ok(StateVector::from_raw(propagate(h, psi0.amplitudes(), t / constants.hbar())))
}

/// Applies `exp(-i H tau)` to `amps`.
fn propagate(h: &HermitianOperator, amps: &[Complex64], tau: f64) -> Vec<Complex64> {
    let vectors = h.eigenvector_rows();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); amps.len()];
    for (k, &energy) in h.eigenvalues().iter().enumerate() {
        let v = vectors.row(k);
        let c = dot(v, amps) * Complex64::from_polar(1.0, -energy * tau);
        for (o, vi) in out.iter_mut().zip(v) {
            *o += c * vi;
        }
    }
    out
}

fn check_inputs(psi0: &StateVector, dim: usize) -> Result<()> {
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: psi0.dim() });
    }
    psi0.ensure_normalized()
}

fn check_grid(t_end: f64, steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::invalid("steps", "must be at least 1"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::invalid("t_end", "must be positive and finite"));
    }
    Ok(())
}

fn uniform_grid(t_end: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|k| if k == steps { t_end } else { t_end * k as f64 / steps as f64 })
        .collect()
}

/// Samples the exact evolution on `steps + 1` uniform points of
/// `[0, t_end]`, each computed directly from `psi0`.
pub fn sample_trajectory(
    psi0: &StateVector,
    h: &HermitianOperator,
    t_end: f64,
    steps: usize,
    constants: PhysicalConstants,
) -> Result<Trajectory> {
    check_grid(t_end, steps)?;
    check_inputs(psi0, h.dim())?;
    let times = uniform_grid(t_end, steps);
    let states = times
        .iter()
        .map(|&t| evolve_exact(psi0, h, t, constants))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times, states, digest: ScheduleDigest::exact(steps, constants) })
}

/// Propagates `psi0` step by step through `schedule` on a uniform grid of
/// `steps + 1` points over `[0, t_end]`.
///
/// The initial state is rescaled to unit norm. After every step the norm
/// drift is measured: drift up to [`RENORMALIZATION_LIMIT`] is removed and
/// counted in the digest, anything larger is an [`Error::NormDrift`].
pub fn evolve_schedule(
    psi0: &StateVector,
    schedule: &HamiltonianSchedule,
    t_end: f64,
    steps: usize,
    constants: PhysicalConstants,
) -> Result<Trajectory> {
    check_grid(t_end, steps)?;
    check_inputs(psi0, schedule.dim())?;
    schedule.covers(0.0, t_end)?;
    let hbar = constants.hbar();
    let times = uniform_grid(t_end, steps);

    let mut digest = ScheduleDigest {
        method: EvolutionMethod::Stepped,
        kind: schedule.kind(),
        steps,
        hbar,
        renormalizations: 0,
        max_norm_drift: 0.0,
    };
    let mut current = crate::state::normalize(psi0)?.into_amplitudes();
    let mut states = Vec::with_capacity(steps + 1);
    states.push(StateVector::from_raw(current.clone()));

    for (step, w) in times.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        current = match schedule.kind() {
            ScheduleKind::Constant => propagate(&schedule.nodes[0].1, &current, (b - a) / hbar),
            ScheduleKind::PiecewiseConstant => {
                let mut amps = current;
                let mut s = a;
                while s < b {
                    let k = schedule.segment_index(s)?;
                    let next = schedule.nodes.get(k + 1).map_or(b, |(t, _)| t.min(b));
                    amps = propagate(&schedule.nodes[k].1, &amps, (next - s) / hbar);
                    s = next;
                }
                amps
            }
            ScheduleKind::Sampled => {
                let h = schedule.operator_at(0.5 * (a + b))?;
                propagate(&h, &current, (b - a) / hbar)
            }
        };

        let norm = norm_of(&current);
        let drift = libm::fabs(norm - 1.0);
        if !(drift <= RENORMALIZATION_LIMIT) {
            return Err(Error::NormDrift { step, drift });
        }
        digest.max_norm_drift = digest.max_norm_drift.max(drift);
        if drift > 0.0 {
            for z in &mut current {
                *z /= norm;
            }
            digest.renormalizations += 1;
            log::trace!("step {step}: renormalized drift {drift:e}");
        }
        states.push(StateVector::from_raw(current.clone()));
    }
    if digest.renormalizations > 0 {
        log::debug!(
            "{} of {steps} steps renormalized, max drift {:e}",
            digest.renormalizations,
            digest.max_norm_drift
        );
    }
    Ok(Trajectory { times, states, digest })
}
