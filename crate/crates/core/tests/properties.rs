// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_2;

use fsqd_core::{
    build_survival_report, energy_uncertainty, evolve_exact, evolve_schedule, expectation,
    fs_distance, fs_distance_states, inner_product, path_length, sample_trajectory,
    survival_amplitude, CMatrix, Complex64, HamiltonianSchedule, HermitianOperator,
    PhysicalConstants, Ray, StateVector,
};
use proptest::prelude::*;

fn amplitudes(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
        .prop_filter("nonzero", |v: &Vec<Complex64>| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6)
}

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    amplitudes(dim).prop_map(|v| StateVector::normalized(v).unwrap())
}

fn hermitian(dim: usize) -> impl Strategy<Value = HermitianOperator> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), dim * dim).prop_map(move |v| {
        let m = CMatrix::from_fn(dim, |i, j| {
            let (re, im) = v[i * dim + j];
            Complex64::new(re, im)
        });
        HermitianOperator::new(m.hermitian_part()).unwrap()
    })
}

fn pair() -> impl Strategy<Value = (StateVector, HermitianOperator)> {
    (2usize..=8).prop_flat_map(|d| (state(d), hermitian(d)))
}

fn phase() -> impl Strategy<Value = Complex64> {
    (0.0f64..std::f64::consts::TAU).prop_map(|p| Complex64::from_polar(1.0, p))
}

fn nonzero_scalar() -> impl Strategy<Value = Complex64> {
    (0.01f64..100.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, p)| Complex64::from_polar(r, p))
}

fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inner_product_is_conjugate_symmetric((a, b) in (2usize..=16).prop_flat_map(|d| (state(d), state(d)))) {
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-14);
        let aa = inner_product(&a, &a).unwrap();
        prop_assert!(aa.im.abs() <= 1e-14 && aa.re >= 0.0);
    }

    #[test]
    fn cauchy_schwarz((a, b) in (2usize..=16).prop_flat_map(|d| (amplitudes(d), amplitudes(d)))) {
        let a = StateVector::new(a).unwrap();
        let b = StateVector::new(b).unwrap();
        prop_assert!(inner_product(&a, &b).unwrap().norm() <= a.norm() * b.norm() + 1e-12);
    }

    #[test]
    fn uncertainty_is_shift_invariant((psi, h) in pair(), shift in -1e3f64..1e3) {
        let base = energy_uncertainty(&h, &psi).unwrap();
        let moved = energy_uncertainty(&h.shifted(shift).unwrap(), &psi).unwrap();
        prop_assert!((base - moved).abs() <= 1e-10, "{base} vs {moved}");
        let mean = expectation(&h, &psi).unwrap();
        let moved_mean = expectation(&h.shifted(shift).unwrap(), &psi).unwrap();
        prop_assert!((moved_mean - mean - shift).abs() <= 1e-10);
    }

    #[test]
    fn uncertainty_scales_linearly((psi, h) in pair(), s in 0.01f64..100.0) {
        let base = energy_uncertainty(&h, &psi).unwrap();
        let scaled = energy_uncertainty(&h.scaled(s).unwrap(), &psi).unwrap();
        prop_assert!((scaled - s * base).abs() <= 1e-10 * (s * base).max(1e-300) + 1e-15);
    }

    #[test]
    fn ray_is_scale_invariant_and_idempotent(v in (2usize..=16).prop_flat_map(amplitudes), alpha in nonzero_scalar()) {
        let v = StateVector::new(v).unwrap();
        let ray = Ray::new(&v).unwrap();
        let scaled = Ray::new(&v.scaled(alpha).unwrap()).unwrap();
        prop_assert!(ray.approx_eq(&scaled, 1e-12));
        let again = Ray::new(ray.representative()).unwrap();
        prop_assert!(ray.approx_eq(&again, 1e-12));
        let pivot = ray.representative().amplitudes().iter().find(|z| z.norm() > 1e-9).unwrap();
        prop_assert!(pivot.im.abs() <= 1e-12 && pivot.re > 0.0);
    }

    #[test]
    fn fs_distance_is_a_metric((a, b, c) in (2usize..=16).prop_flat_map(|d| (amplitudes(d), amplitudes(d), amplitudes(d))), alpha in nonzero_scalar()) {
        let (a, b, c) = (StateVector::new(a).unwrap(), StateVector::new(b).unwrap(), StateVector::new(c).unwrap());
        let (ra, rb, rc) = (Ray::new(&a).unwrap(), Ray::new(&b).unwrap(), Ray::new(&c).unwrap());
        let ab = fs_distance(&ra, &rb).unwrap();
        prop_assert_eq!(ab, fs_distance(&rb, &ra).unwrap());
        prop_assert!((0.0..=FRAC_PI_2).contains(&ab));
        let scaled = fs_distance_states(&a.scaled(alpha).unwrap(), &b).unwrap();
        prop_assert!((scaled - ab).abs() <= 1e-12);
        let ac = fs_distance(&ra, &rc).unwrap();
        let bc = fs_distance(&rb, &rc).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert!(fs_distance(&ra, &ra).unwrap() < 1e-9);
    }

    #[test]
    fn fs_distance_is_unitarily_invariant((a, b, h) in (2usize..=8).prop_flat_map(|d| (state(d), state(d), hermitian(d))), t in -5.0f64..5.0) {
        let c = PhysicalConstants::default();
        // U = exp(-i H t), applied column by column through the propagator
        let ua = evolve_exact(&a, &h, t, c).unwrap();
        let ub = evolve_exact(&b, &h, t, c).unwrap();
        let before = fs_distance_states(&a, &b).unwrap();
        let after = fs_distance_states(&ua, &ub).unwrap();
        prop_assert!((before - after).abs() <= 1e-10);
    }

    #[test]
    fn evolution_is_unitary_and_conserves_energy((psi, h) in pair(), t in 0.0f64..20.0) {
        let c = PhysicalConstants::default();
        let out = evolve_exact(&psi, &h, t, c).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((expectation(&h, &out).unwrap() - expectation(&h, &psi).unwrap()).abs() <= 1e-10);
        prop_assert!((energy_uncertainty(&h, &out).unwrap() - energy_uncertainty(&h, &psi).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn evolution_composes_and_reverses((psi, h) in pair(), s in -5.0f64..5.0, t in -5.0f64..5.0) {
        let c = PhysicalConstants::default();
        let direct = evolve_exact(&psi, &h, s + t, c).unwrap();
        let composed = evolve_exact(&evolve_exact(&psi, &h, s, c).unwrap(), &h, t, c).unwrap();
        prop_assert!(max_diff(&direct, &composed) <= 1e-11);
        let back = evolve_exact(&evolve_exact(&psi, &h, t, c).unwrap(), &h, -t, c).unwrap();
        prop_assert!(max_diff(&back, &psi) <= 1e-11);
    }

    #[test]
    fn survival_amplitude_is_bounded((psi, h) in pair(), t_end in 0.1f64..10.0) {
        let c = PhysicalConstants::default();
        let traj = sample_trajectory(&psi, &h, t_end, 32, c).unwrap();
        for a in survival_amplitude(&traj).unwrap() {
            prop_assert!(a.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn reports_ignore_global_phase_and_energy_offset((psi, h) in pair(), ph in phase(), shift in -1e3f64..1e3) {
        let c = PhysicalConstants::default();
        let dh = energy_uncertainty(&h, &psi).unwrap();
        let horizon = if dh > 1e-6 { FRAC_PI_2 / dh } else { 1.0 };
        let report = |psi: &StateVector, h: &HermitianOperator| {
            let traj = sample_trajectory(psi, h, horizon, 64, c).unwrap();
            build_survival_report(&traj, &HamiltonianSchedule::constant(h.clone()), c).unwrap()
        };
        let base = report(&psi, &h);
        let phased = report(&psi.scaled(ph).unwrap(), &h);
        let shifted = report(&psi, &h.shifted(shift).unwrap());

        let close = |x: &[f64], y: &[f64], tol: f64| x.iter().zip(y).all(|(a, b)| (a - b).abs() <= tol);
        let close_opt = |x: &[Option<f64>], y: &[Option<f64>], tol: f64| {
            x.iter().zip(y).all(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => (a - b).abs() <= tol,
                (None, None) => true,
                // rounding at the pi/2 domain edge, where cos is ~0
                (Some(a), None) | (None, Some(a)) => a.abs() <= tol,
            })
        };
        prop_assert!(close(&base.amplitude_abs, &phased.amplitude_abs, 1e-12));
        prop_assert!(close(&base.probability, &phased.probability, 1e-12));
        prop_assert!(close_opt(&base.predicted_abs, &phased.predicted_abs, 1e-12));
        prop_assert!(close_opt(&base.mt_bound, &phased.mt_bound, 1e-12));
        prop_assert!(close(&base.decay_rate_closed, &phased.decay_rate_closed, 1e-12));

        prop_assert!(close(&base.amplitude_abs, &shifted.amplitude_abs, 1e-10));
        prop_assert!(close_opt(&base.predicted_abs, &shifted.predicted_abs, 1e-10));
        prop_assert!(close_opt(&base.mt_bound, &shifted.mt_bound, 1e-10));
        prop_assert!(close(&base.decay_rate_closed, &shifted.decay_rate_closed, 1e-10));
        // finite differences amplify by 1/(2 dt) = 64 / (2 horizon)
        let amplification = 32.0 / horizon;
        prop_assert!(close_opt(&base.decay_rate_empirical, &shifted.decay_rate_empirical, 1e-10 * amplification.max(1.0)));
        prop_assert_eq!(base.violations, Some(vec![]));
    }

    #[test]
    fn path_length_dominates_endpoint_distance((psi, h) in pair(), t_end in 0.1f64..10.0) {
        let c = PhysicalConstants::default();
        let traj = sample_trajectory(&psi, &h, t_end, 128, c).unwrap();
        let r = path_length(&traj, &HamiltonianSchedule::constant(h.clone()), c).unwrap();
        prop_assert!(r.deficit >= -1e-9);
        // constant rate: the trapezoid is exact up to rounding
        let analytic = t_end * energy_uncertainty(&h, &psi).unwrap();
        prop_assert!((r.length - analytic).abs() <= 1e-10 * analytic.max(1.0));
    }

    #[test]
    fn stepped_constant_schedule_matches_exact((psi, h) in pair(), t_end in 0.1f64..5.0, steps in 1usize..200) {
        let c = PhysicalConstants::default();
        let traj = evolve_schedule(&psi, &HamiltonianSchedule::constant(h.clone()), t_end, steps, c).unwrap();
        for (t, s) in traj.times().iter().zip(traj.states()) {
            prop_assert!(max_diff(s, &evolve_exact(&psi, &h, *t, c).unwrap()) <= 1e-10);
        }
    }
}

#[test]
fn stepped_norm_stays_within_tolerance_over_many_steps() {
    let c = PhysicalConstants::default();
    let a = HermitianOperator::from_diagonal(&[1.0, -0.5, 0.25]).unwrap();
    let b = HermitianOperator::new(CMatrix::from_fn(3, |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else if i < j {
            Complex64::new(0.3, 0.4)
        } else {
            Complex64::new(0.3, -0.4)
        }
    }))
    .unwrap();
    let sched = HamiltonianSchedule::sampled(vec![(0.0, a), (10.0, b)]).unwrap();
    let psi = StateVector::normalized(vec![
        Complex64::new(0.5, 0.1),
        Complex64::new(-0.2, 0.7),
        Complex64::new(0.3, 0.0),
    ])
    .unwrap();
    let traj = evolve_schedule(&psi, &sched, 10.0, 1000, c).unwrap();
    assert!(traj.states().iter().all(|s| (s.norm() - 1.0).abs() <= 1e-9));
}

#[test]
fn path_length_converges_at_second_order_for_time_dependent_schedule() {
    // the reference uses a much finer grid of the same stepped trajectory
    let c = PhysicalConstants::default();
    let a = HermitianOperator::from_diagonal(&[0.0, 1.0, 3.0]).unwrap();
    let b = HermitianOperator::new(CMatrix::from_fn(3, |i, j| {
        Complex64::new(if i != j { 1.0 } else { 0.0 }, 0.0)
    }))
    .unwrap();
    let sched = HamiltonianSchedule::sampled(vec![(0.0, a), (2.0, b)]).unwrap();
    let psi = StateVector::normalized(vec![Complex64::new(1.0, 0.0); 3]).unwrap();
    let length = |steps| {
        let traj = evolve_schedule(&psi, &sched, 2.0, steps, c).unwrap();
        path_length(&traj, &sched, c).unwrap().length
    };
    let reference = length(1 << 14);
    let mut previous = f64::INFINITY;
    for steps in [16, 32, 64, 128] {
        let err = (length(steps) - reference).abs();
        assert!(err < previous, "steps={steps}");
        if previous.is_finite() {
            assert!((previous / err).log2() >= 1.8, "steps={steps} order {}", (previous / err).log2());
        }
        previous = err;
    }
}
