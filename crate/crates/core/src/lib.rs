// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! Pure-state quantum dynamics seen through Fubini-Study geometry.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * state vectors, rays and Hermitian operators ([`state`], [`operator`]),
//!   with a dense Hermitian eigensolver in [`linalg`];
//! * the Fubini-Study distance, its instantaneous rate and path lengths
//!   ([`geometry`]);
//! * exact spectral propagation and stepped propagation under
//!   time-dependent schedules ([`dynamics`]);
//! * survival amplitudes, the cosine survival prediction, the
//!   Mandelstam-Tamm bound and decay rates ([`survival`]).
//!
//! File formats and the command-line front end live in the `fsqd` crate.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod operator;
pub mod state;
pub mod survival;

pub use num_complex::Complex64;

pub use dynamics::{
    evolve_exact, evolve_schedule, sample_trajectory, EvolutionMethod, HamiltonianSchedule,
    ScheduleDigest, ScheduleKind, Trajectory,
};
pub use error::{Error, Result};
pub use geometry::{fs_distance, fs_distance_states, fs_rate, path_length, PathLengthResult};
pub use linalg::CMatrix;
pub use operator::{
    energy_uncertainty, expectation, spectral_decomposition, HermitianOperator, PhysicalConstants,
};
pub use state::{inner_product, normalize, Ray, StateVector};
pub use survival::{
    build_survival_report, decay_rate_closed, decay_rate_empirical, decay_velocity, mt_check,
    mt_scan, predicted_amplitude, survival_amplitude, MtScan, Prediction, SurvivalReport,
    Violation,
};

/// Accepted deviation of `<psi|psi>` from one at API boundaries.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Relative tolerance of the Hermiticity check, scaled by `max(1, |M|_max)`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
