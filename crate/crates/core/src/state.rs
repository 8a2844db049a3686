// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! State vectors in the coordinate basis and their projective rays.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::NORM_TOLERANCE;

/// Amplitudes smaller than this fraction of the largest modulus are skipped
/// when picking the gauge amplitude of a ray.
const GAUGE_THRESHOLD: f64 = 1e-10;

/// Complex amplitudes of a pure state in an `N`-dimensional Hilbert space.
///
/// Construction guarantees `N >= 2`, finite entries and a nonzero vector.
/// Normalization is *not* implied; operations that need a unit vector check
/// it against [`NORM_TOLERANCE`] and fail instead of renormalizing.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        if let Some(i) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if amplitudes.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { amplitudes })
    }

    /// Builds the state and rescales it to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        normalize(&Self::new(amplitudes)?)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The coordinate basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::invalid("index", "basis index out of range"));
        }
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    pub fn is_normalized(&self) -> bool {
        libm::fabs(self.norm_sqr() - 1.0) <= NORM_TOLERANCE
    }

    /// Fails with [`Error::NotNormalized`] when `|<psi|psi> - 1| > 1e-9`.
    pub fn ensure_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if libm::fabs(norm_sqr - 1.0) <= NORM_TOLERANCE {
            Ok(())
        } else {
            let norm = libm::sqrt(norm_sqr);
            Err(Error::NotNormalized { norm, deviation: libm::fabs(norm - 1.0) })
        }
    }

    /// `alpha * self`; `alpha` must be nonzero.
    pub fn scaled(&self, alpha: Complex64) -> Result<Self> {
        Self::new(self.amplitudes.iter().map(|z| z * alpha).collect())
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        debug_assert!(amplitudes.len() >= 2);
        Self { amplitudes }
    }
}

/// `sum_i conj(a_i) * b_i`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(dot(a.amplitudes(), b.amplitudes()))
}

pub fn normalize(v: &StateVector) -> Result<StateVector> {
    let norm = v.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let inv = 1.0 / norm;
    Ok(StateVector::from_raw(v.amplitudes.iter().map(|z| z * inv).collect()))
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Overflow-safe Euclidean norm.
pub(crate) fn norm_of(v: &[Complex64]) -> f64 {
    let scale = v.iter().map(|z| libm::fabs(z.re).max(libm::fabs(z.im))).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let sum: f64 = v.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * libm::sqrt(sum)
}

/// Rotates `v` in place so its first significant amplitude is real and positive.
pub(crate) fn fix_gauge(v: &mut [Complex64]) {
    let largest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().find(|z| z.norm() > GAUGE_THRESHOLD * largest).copied() {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
        // remove the rounding residue on the pivot itself
        if let Some(z) = v.iter_mut().find(|z| z.norm() > GAUGE_THRESHOLD * largest) {
            *z = Complex64::new(z.norm(), 0.0);
        }
    }
}

/// Projective class of a state: every nonzero multiple of a vector maps to
/// the same ray.
///
/// The representative is normalized and its first significant amplitude is
/// real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    representative: StateVector,
}

impl Ray {
    pub fn new(v: &StateVector) -> Result<Self> {
        let mut rep = normalize(v)?.into_amplitudes();
        fix_gauge(&mut rep);
        Ok(Self { representative: StateVector::from_raw(rep) })
    }

    pub fn representative(&self) -> &StateVector {
        &self.representative
    }

    pub fn dim(&self) -> usize {
        self.representative.dim()
    }

    /// Componentwise comparison of the gauge-fixed representatives.
    pub fn approx_eq(&self, other: &Ray, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .representative
                .amplitudes()
                .iter()
                .zip(other.representative.amplitudes())
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

impl From<Ray> for StateVector {
    fn from(ray: Ray) -> Self {
        ray.representative
    }
}

impl TryFrom<&StateVector> for Ray {
    type Error = Error;

    fn try_from(v: &StateVector) -> Result<Self> {
        Ray::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(StateVector::from_real(&[1.0]), Err(Error::DimensionTooSmall(1)));
        assert_eq!(StateVector::from_real(&[0.0, 0.0]), Err(Error::ZeroVector));
        assert_eq!(StateVector::from_real(&[1.0, f64::NAN]), Err(Error::NonFinite(1)));
    }

    #[test]
    fn inner_product_examples() {
        let e1 = StateVector::basis(2, 0).unwrap();
        let e2 = StateVector::basis(2, 1).unwrap();
        let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert_eq!(inner_product(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&e1, &e2).unwrap(), c(0.0, 0.0));
        let ov = inner_product(&e1, &plus).unwrap();
        assert!((ov - c(libm::sqrt(0.5), 0.0)).norm() < 1e-16);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let a = StateVector::new(alloc::vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let b = StateVector::basis(2, 0).unwrap();
        assert_eq!(inner_product(&a, &b).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::basis(3, 0).unwrap();
        let err = inner_product(&a, &b).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
        assert!(alloc::format!("{err}").contains("2 vs 3"));
    }

    #[test]
    fn normalize_examples() {
        let v = normalize(&StateVector::from_real(&[2.0, 0.0]).unwrap()).unwrap();
        assert_eq!(v.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let v = normalize(&StateVector::from_real(&[1.0, 1.0]).unwrap()).unwrap();
        for z in v.amplitudes() {
            assert!((z - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }

        let v = normalize(&StateVector::new(alloc::vec![c(0.0, 3.0), c(4.0, 0.0)]).unwrap())
            .unwrap();
        assert!((v.amplitudes()[0] - c(0.0, 0.6)).norm() < 1e-15);
        assert!((v.amplitudes()[1] - c(0.8, 0.0)).norm() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn normalize_handles_extreme_scales() {
        let tiny = StateVector::from_real(&[1e-300, 1e-300]).unwrap();
        assert!((normalize(&tiny).unwrap().norm() - 1.0).abs() < 1e-14);
        let huge = StateVector::from_real(&[1e300, 1e300]).unwrap();
        assert!((normalize(&huge).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ensure_normalized_reports_deviation() {
        let v = StateVector::from_real(&[1.0, 1.0]).unwrap();
        match v.ensure_normalized() {
            Err(Error::NotNormalized { norm, .. }) => {
                assert!((norm - core::f64::consts::SQRT_2).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ray_gauge() {
        let v = StateVector::new(alloc::vec![c(0.0, 2.0), c(2.0, 0.0)]).unwrap();
        let ray = Ray::new(&v).unwrap();
        let first = ray.representative().amplitudes()[0];
        assert_eq!(first.im, 0.0);
        assert!(first.re > 0.0);
        assert!((ray.representative().norm() - 1.0).abs() < 1e-15);

        // leading zero amplitude: gauge moves to the next one
        let v = StateVector::new(alloc::vec![c(0.0, 0.0), c(0.0, -3.0)]).unwrap();
        let ray = Ray::new(&v).unwrap();
        assert_eq!(ray.representative().amplitudes()[1], c(1.0, 0.0));
    }

    #[test]
    fn ray_is_invariant_under_scaling() {
        let v = StateVector::new(alloc::vec![c(0.3, -0.2), c(-1.1, 0.7), c(0.05, 0.9)]).unwrap();
        let alpha = c(-2.5, 7.25);
        let a = Ray::new(&v).unwrap();
        let b = Ray::new(&v.scaled(alpha).unwrap()).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
        let again = Ray::new(a.representative()).unwrap();
        assert!(a.approx_eq(&again, 1e-15));
    }
}
