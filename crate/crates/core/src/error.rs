// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} is too small, at least 2 is required")]
    DimensionTooSmall(usize),

    #[error("the zero vector is not a quantum state")]
    ZeroVector,

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("state is not normalized: norm {norm} deviates from 1 by {deviation:e}")]
    NotNormalized { norm: f64, deviation: f64 },

    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("matrix is not Hermitian: |M[{row}][{col}] - conj(M[{col}][{row}])| = {deviation:e}")]
    NotHermitian { deviation: f64, row: usize, col: usize },

    #[error("eigenvalue iteration did not converge for index {0}")]
    NoConvergence(usize),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: &'static str },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("time grid is not strictly ascending at index {0}")]
    NonMonotonicGrid(usize),

    #[error("time grid is not uniform at index {0}")]
    NonUniformGrid(usize),

    #[error("times and states differ in length: {times} vs {states}")]
    LengthMismatch { times: usize, states: usize },

    #[error("schedule does not cover t = {0}")]
    ScheduleGap(f64),

    #[error("schedule breakpoints are not strictly ascending at index {0}")]
    ScheduleOrder(usize),

    #[error("norm drift {drift:e} at step {step} exceeds the renormalization limit")]
    NormDrift { step: usize, drift: f64 },
}

impl Error {
    pub(crate) const fn invalid(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidArgument { name, reason }
    }
}
