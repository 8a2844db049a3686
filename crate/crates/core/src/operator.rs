// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! Hermitian operators, their moments in a state, and physical constants.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::state::{dot, StateVector};
use crate::HERMITICITY_TOLERANCE;

/// Reduced Planck constant in the caller's action units.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalConstants {
    hbar: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64) -> Result<Self> {
        if hbar > 0.0 && hbar.is_finite() {
            Ok(Self { hbar })
        } else {
            Err(Error::invalid("hbar", "must be positive and finite"))
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Natural units, `hbar = 1`.
impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0 }
    }
}

/// An `N x N` Hermitian matrix with its spectral decomposition.
///
/// The decomposition is computed once at construction, so the value is
/// immutable and freely shareable between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
    eigenvalues: Vec<f64>,
    // row k holds the eigenvector of eigenvalues[k]
    eigenvectors: CMatrix,
}

impl HermitianOperator {
    /// Accepts `matrix` when `|M - M^dagger|_max <= 1e-10 * max(1, |M|_max)`
    /// and stores the exact Hermitian part `(M + M^dagger) / 2`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::DimensionTooSmall(matrix.dim()));
        }
        if let Some(i) =
            matrix.as_slice().iter().position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        let (deviation, row, col) = matrix.hermitian_deviation();
        if deviation > HERMITICITY_TOLERANCE * matrix.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation, row, col });
        }
        let matrix = matrix.hermitian_part();
        let (eigenvalues, eigenvectors) = hermitian_eigen(&matrix)?;
        Ok(Self { matrix, eigenvalues, eigenvectors })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(diag))
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(CMatrix::from_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(CMatrix::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> StateVector {
        StateVector::from_raw(self.eigenvectors.row(k).to_vec())
    }

    pub(crate) fn eigenvector_rows(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// `H + shift * I`.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        let mut m = self.matrix.clone();
        for i in 0..m.dim() {
            m[(i, i)] += shift;
        }
        Self::new(m)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.matrix.scale(Complex64::new(factor, 0.0)))
    }

    /// `(1 - s) * a + s * b`.
    pub fn interpolate(a: &Self, b: &Self, s: f64) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
        }
        let m = a.matrix.scale(Complex64::new(1.0 - s, 0.0)).add(&b.matrix.scale(Complex64::new(s, 0.0)));
        Self::new(m)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        self.check_dim(psi)?;
        Ok(self.matrix.mul_vec(psi.amplitudes()))
    }

    fn check_dim(&self, psi: &StateVector) -> Result<()> {
        if self.dim() == psi.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.dim(), right: psi.dim() })
        }
    }
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors.
///
/// Eigenvectors are gauge-fixed (first significant component real and
/// positive) and deterministic for a given input, including inside
/// degenerate subspaces.
pub fn spectral_decomposition(h: &HermitianOperator) -> (Vec<f64>, Vec<StateVector>) {
    let vectors = (0..h.dim()).map(|k| h.eigenvector(k)).collect();
    (h.eigenvalues.clone(), vectors)
}

/// `<psi|H|psi>` for a normalized `psi`.
pub fn expectation(h: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    h.check_dim(psi)?;
    psi.ensure_normalized()?;
    Ok(mean_and_spread(h, psi).0)
}

/// Standard deviation of `H` in `psi`, `sqrt(<H^2> - <H>^2)`.
///
/// Evaluated as `|(H - <H>) psi|`, which equals the moment formula but
/// avoids cancelling two large moments against each other; it stays
/// accurate under a constant energy offset and is never negative.
pub fn energy_uncertainty(h: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    h.check_dim(psi)?;
    psi.ensure_normalized()?;
    Ok(mean_and_spread(h, psi).1)
}

/// Mean and standard deviation without argument checks.
pub(crate) fn mean_and_spread(h: &HermitianOperator, psi: &StateVector) -> (f64, f64) {
    let amps = psi.amplitudes();
    let norm_sqr = psi.norm_sqr();
    let h_psi = h.matrix.mul_vec(amps);
    let mean = dot(amps, &h_psi) / norm_sqr;
    debug_assert!(libm::fabs(mean.im) <= 1e-12 * h.matrix.max_abs().max(1.0));
    let mean = mean.re;
    let spread_sqr: f64 = h_psi.iter().zip(amps).map(|(hz, z)| (hz - z * mean).norm_sqr()).sum();
    (mean, libm::sqrt(spread_sqr / norm_sqr))
}
