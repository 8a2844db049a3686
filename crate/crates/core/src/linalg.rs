// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices and the Hermitian eigensolver.
//!
//! The eigensolver reduces the matrix to Hermitian tridiagonal form with
//! Householder reflections, rotates the off-diagonal to be real with a
//! diagonal phase matrix and then runs the implicit QL iteration with
//! Wilkinson shifts on the real symmetric tridiagonal matrix, accumulating
//! every transformation into the eigenvector basis.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{fix_gauge, norm_of};

const MAX_QL_ITERATIONS: usize = 60;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Fails with [`Error::NotSquare`] on ragged or non-square input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, row, len: r.len() });
            }
            data.extend(r);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(v.len(), self.dim);
        self.rows().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &CMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &CMatrix) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest entry modulus, `|M|_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|M_ij - conj(M_ji)|` over `i <= j`, with its position.
    pub fn hermitian_deviation(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let mut out = Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5);
        for i in 0..self.dim {
            out[(i, i)].im = 0.0;
        }
        out
    }

    fn is_finite(&self) -> Option<usize> {
        self.data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// The input must be exactly Hermitian (see [`CMatrix::hermitian_part`]).
/// Returns ascending eigenvalues
/// and a matrix whose row `k` is the unit eigenvector for eigenvalue `k`,
/// gauge-fixed so its first significant component is real and positive.
pub fn hermitian_eigen(matrix: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if let Some(i) = matrix.is_finite() {
        return Err(Error::NonFinite(i));
    }
    let n = matrix.dim();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0)));
    }
    let (mut diag, mut off, basis) = tridiagonalize(matrix);
    // rows of `vectors` are the columns of the accumulated transformation
    let mut vectors = basis.adjoint().conj_entries();
    tridiagonal_ql(&mut diag, &mut off, &mut vectors)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let mut sorted = Vec::with_capacity(n * n);
    for &k in &order {
        let mut v = vectors.row(k).to_vec();
        fix_gauge(&mut v);
        sorted.extend(v);
    }
    Ok((values, CMatrix { dim: n, data: sorted }))
}

impl CMatrix {
    fn conj_entries(mut self) -> Self {
        for z in &mut self.data {
            *z = z.conj();
        }
        self
    }
}

/// Returns the real diagonal, the real (nonnegative) off-diagonal padded with
/// a trailing zero, and the unitary `Z` with `A = Z T Z^dagger`.
fn tridiagonalize(matrix: &CMatrix) -> (Vec<f64>, Vec<f64>, CMatrix) {
    let n = matrix.dim();
    let mut a = matrix.clone();
    let mut q = CMatrix::identity(n);
    let zero = Complex64::new(0.0, 0.0);

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = norm_of(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = norm_of(&v);
        for z in &mut v {
            *z /= vnorm;
        }

        // trailing block B <- H B H with H = I - 2 v v^dagger
        let off = k + 1;
        let mut p = vec![zero; m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a.data[(off + i) * n + off..(off + i) * n + n];
            *pi = row.iter().zip(&v).map(|(b, vj)| b * vj).sum();
        }
        let kappa: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kappa.re).collect();
        for i in 0..m {
            let row = &mut a.data[(off + i) * n + off..(off + i) * n + n];
            let (vi, wi) = (v[i] * 2.0, w[i] * 2.0);
            for j in 0..m {
                row[j] -= vi * w[j].conj() + wi * v[j].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = zero;
            a[(k, i)] = zero;
        }

        // Q <- Q H
        for r in 0..n {
            let row = &mut q.data[r * n + off..r * n + n];
            let s: Complex64 = row.iter().zip(&v).map(|(qr, vj)| qr * vj).sum::<Complex64>() * 2.0;
            for (qr, vj) in row.iter_mut().zip(&v) {
                *qr -= s * vj.conj();
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phase = Complex64::new(1.0, 0.0);
    let mut phases = vec![phase; n];
    for i in 0..n - 1 {
        let e = a[(i + 1, i)];
        let r = e.norm();
        off[i] = r;
        if r > 0.0 {
            phase *= e / r;
            // keep the running phase on the unit circle
            phase /= phase.norm();
        }
        phases[i + 1] = phase;
    }
    for r in 0..n {
        for (c, ph) in phases.iter().enumerate() {
            q.data[r * n + c] *= ph;
        }
    }
    (diag, off, q)
}

/// Implicit QL with Wilkinson shifts. `off[i]` couples `i` and `i + 1`;
/// rotations are applied to the rows of `vectors`.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], vectors: &mut CMatrix) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = libm::fabs(diag[m]) + libm::fabs(diag[m + 1]);
                if libm::fabs(off[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence(l));
            }

            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = libm::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = libm::hypot(f, g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                rotate_rows(vectors, i, s, c);
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

fn rotate_rows(vectors: &mut CMatrix, i: usize, s: f64, c: f64) {
    let n = vectors.dim;
    let (head, tail) = vectors.data.split_at_mut((i + 1) * n);
    let lower = &mut head[i * n..];
    let upper = &mut tail[..n];
    for (zi, zj) in lower.iter_mut().zip(upper.iter_mut()) {
        let f = *zj;
        *zj = *zi * s + f * c;
        *zi = *zi * c - f * s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Deterministic pseudo-random Hermitian matrix (xorshift entries).
    fn pseudo_random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let m = CMatrix::from_fn(n, |_, _| c(next(), next()));
        m.hermitian_part()
    }

    fn check_decomposition(h: &CMatrix) {
        let n = h.dim();
        let (values, rows) = hermitian_eigen(h).unwrap();
        let scale = h.max_abs().max(1.0);
        for w in values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        // V has the eigenvectors as columns
        let v = CMatrix::from_fn(n, |i, j| rows[(j, i)]);
        let lambda = CMatrix::from_diagonal(&values);
        let recon = v.mul(&lambda).mul(&v.adjoint());
        let resid = recon.sub(h).max_abs();
        assert!(resid <= 1e-10 * scale, "n={n} reconstruction residual {resid:e}");
        let unit = v.adjoint().mul(&v).sub(&CMatrix::identity(n)).max_abs();
        assert!(unit <= 1e-10, "n={n} unitarity residual {unit:e}");
    }

    #[test]
    fn diagonal_is_sorted() {
        let (values, vecs) = hermitian_eigen(&CMatrix::from_diagonal(&[2.0, 1.0])).unwrap();
        assert_eq!(values, [1.0, 2.0]);
        assert_eq!(vecs.row(0), &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(vecs.row(1), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn pauli_x_closed_form() {
        let h = CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let (values, vecs) = hermitian_eigen(&h).unwrap();
        assert!((values[0] + 1.0).abs() < 1e-15 && (values[1] - 1.0).abs() < 1e-15);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let expect = [[s, -s], [s, s]];
        for (k, row) in expect.iter().enumerate() {
            for (got, want) in vecs.row(k).iter().zip(row) {
                assert!((got - c(*want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn degenerate_identity() {
        let (values, vecs) = hermitian_eigen(&CMatrix::identity(3)).unwrap();
        assert_eq!(values, [1.0, 1.0, 1.0]);
        check_decomposition(&CMatrix::identity(3));
        assert_eq!(vecs, hermitian_eigen(&CMatrix::identity(3)).unwrap().1);
    }

    #[test]
    fn random_reconstruction() {
        for n in 1..=40 {
            for seed in 0..5 {
                check_decomposition(&pseudo_random_hermitian(n, seed * 131 + n as u64));
            }
        }
    }

    #[test]
    fn partially_degenerate_and_zero_blocks() {
        let mut h = CMatrix::identity(6).scale(c(2.0, 0.0));
        h[(0, 1)] = c(0.0, 1.0);
        h[(1, 0)] = c(0.0, -1.0);
        check_decomposition(&h);
        check_decomposition(&CMatrix::zeros(4));
        // block diagonal with a zero coupling in the middle
        let mut b = CMatrix::zeros(4);
        b[(0, 1)] = c(1.0, 1.0);
        b[(1, 0)] = c(1.0, -1.0);
        b[(2, 3)] = c(0.0, 2.0);
        b[(3, 2)] = c(0.0, -2.0);
        check_decomposition(&b);
    }

    #[test]
    fn large_scale_entries() {
        let h = pseudo_random_hermitian(12, 7).scale(c(1e6, 0.0));
        check_decomposition(&h);
        let h = pseudo_random_hermitian(12, 8).scale(c(1e-6, 0.0));
        check_decomposition(&h);
    }

    #[test]
    fn deterministic() {
        let h = pseudo_random_hermitian(9, 3);
        assert_eq!(hermitian_eigen(&h).unwrap(), hermitian_eigen(&h).unwrap());
    }

    #[test]
    fn rejects_non_finite() {
        let mut h = CMatrix::identity(2);
        h[(1, 1)] = c(f64::NAN, 0.0);
        assert_eq!(hermitian_eigen(&h), Err(Error::NonFinite(3)));
    }

    #[test]
    fn hermitian_deviation_location() {
        let m = CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        assert_eq!(m.hermitian_deviation(), (1.0, 0, 1));
    }
}
