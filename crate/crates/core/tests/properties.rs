use std::f64::consts::PI;

use gravwitness_core::analysis::{
    calibrate, cp_potential, find_phase_jump, model_phase, CpParams, Model,
};
use gravwitness_core::gravmodel::{
    branch_phases, phase_classical_closed, phase_quantum_closed, semiclassical_phase,
    CouplingConvention, ExperimentParams,
};
use gravwitness_core::qstate::{
    concurrence, inner_product, negativity, overlap_visibility, pancharatnam_phase,
    reduced_visibility, single_qubit_superposition, two_qubit_state, DensityMatrix4, PureState,
    ORTHOGONALITY_TOL,
};
use gravwitness_core::{ComplexAmplitude, Error};
use proptest::prelude::*;

fn phase() -> impl Strategy<Value = f64> {
    -4.0 * PI..4.0 * PI
}

fn state(dim: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| {
            PureState::normalized(
                v.into_iter()
                    .map(|(a, b)| ComplexAmplitude::new(a, b))
                    .collect(),
            )
            .unwrap()
        })
}

fn state_pair() -> impl Strategy<Value = (PureState, PureState)> {
    prop_oneof![Just(2usize), Just(4usize)].prop_flat_map(|n| (state(n), state(n)))
}

proptest! {
    #[test]
    fn constructors_are_normalized(p1 in phase(), p2 in phase()) {
        prop_assert!((two_qubit_state(p1, p2).unwrap().as_pure().norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((single_qubit_superposition(p1).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_is_visibility_times_phase((a, b) in state_pair()) {
        let z = inner_product(&a, &b).unwrap();
        prop_assert!(z.norm() <= 1.0 + 1e-12);
        let v = overlap_visibility(&a, &b).unwrap();
        match pancharatnam_phase(&a, &b) {
            Ok(phi) => {
                prop_assert!(phi > -PI && phi <= PI);
                prop_assert!((ComplexAmplitude::from_polar(v, phi) - z).norm() < 1e-12);
            }
            Err(Error::UndefinedPhase { .. }) => prop_assert!(v < ORTHOGONALITY_TOL),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn phase_is_antisymmetric_under_swap((a, b) in state_pair()) {
        let z = inner_product(&a, &b).unwrap();
        prop_assume!(z.norm() > ORTHOGONALITY_TOL && !(z.re < 0.0 && z.im.abs() < 1e-12));
        let forward = pancharatnam_phase(&a, &b).unwrap();
        let backward = pancharatnam_phase(&b, &a).unwrap();
        prop_assert!((forward + backward).abs() < 1e-12);
    }

    #[test]
    fn complementarity(p1 in phase(), p2 in phase()) {
        let s = two_qubit_state(p1, p2).unwrap();
        let c = concurrence(&s);
        for which in [1, 2] {
            let v = reduced_visibility(&s, which).unwrap();
            prop_assert!((v * v + c * c - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn concurrence_is_symmetric(p1 in phase(), p2 in phase()) {
        let a = concurrence(&two_qubit_state(p1, p2).unwrap());
        let b = concurrence(&two_qubit_state(p2, p1).unwrap());
        prop_assert!((a - b).abs() < 1e-15);
        prop_assert!((a - ((p1 + p2) / 2.0).sin().abs()).abs() < 1e-12);
    }

    #[test]
    fn negativity_is_half_concurrence_for_random_pure_states(s in state(4)) {
        let s = gravwitness_core::TwoQubitState::new(s).unwrap();
        let n = negativity(&DensityMatrix4::from_pure(&s)).unwrap();
        prop_assert!((n - concurrence(&s) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn phases_are_linear_in_time(t in 0.0f64..0.75) {
        let p = ExperimentParams::default();
        let (a1, a2) = branch_phases(&p, t).unwrap();
        let (b1, b2) = branch_phases(&p, 2.0 * t).unwrap();
        let (s1, s2) = (semiclassical_phase(&p, t).unwrap(), semiclassical_phase(&p, 2.0 * t).unwrap());
        prop_assert!((b1 - 2.0 * a1).abs() <= 1e-12 * b1.abs().max(1.0));
        prop_assert!((b2 - 2.0 * a2).abs() <= 1e-12 * b2.abs().max(1.0));
        prop_assert!((s2 - 2.0 * s1).abs() <= 1e-12 * s2.abs().max(1.0));
    }

    #[test]
    fn branch_phase_sign_structure(
        t in 1e-3f64..1.5,
        d in 200e-6f64..2e-3,
        frac in 0.01f64..0.95,
    ) {
        let p = ExperimentParams { d, dx: frac * d, ..ExperimentParams::default() };
        let (phi1, phi2) = branch_phases(&p, t).unwrap();
        prop_assert!(phi1 > 0.0 && phi2 < 0.0 && phi1.abs() > phi2.abs());
        let lhs = phi1.abs() * d * (d - p.dx);
        let rhs = phi2.abs() * d * (d + p.dx);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
        let phi = semiclassical_phase(&p, t).unwrap();
        prop_assert!(phi2 < phi && phi < phi1);
    }

    #[test]
    fn coupling_convention_doubles_every_phase(t in 0.0f64..1.5) {
        let sq = ExperimentParams::default();
        let mm = sq.with_coupling(CouplingConvention::M0TimesM);
        let (a1, a2) = branch_phases(&sq, t).unwrap();
        let (b1, b2) = branch_phases(&mm, t).unwrap();
        prop_assert_eq!((b1, b2), (2.0 * a1, 2.0 * a2));
        prop_assert_eq!(semiclassical_phase(&mm, t).unwrap(), 2.0 * semiclassical_phase(&sq, t).unwrap());
    }

    #[test]
    fn jump_location_is_exact_for_any_tolerance(
        m0 in 3e-14f64..2e-13,
        exponent in 3i32..=9,
    ) {
        let tol = 10f64.powi(-exponent);
        let p = ExperimentParams { m0, ..ExperimentParams::default() };
        let (_, _, rate) = p.phase_rates().unwrap();
        let expected = PI / rate;
        prop_assume!(expected < p.t_total);
        let report = find_phase_jump(&p, Model::Semiclassical, (0.0, p.t_total), tol).unwrap().unwrap();
        prop_assert!((report.t_jump - expected).abs() <= tol);
        prop_assert!(report.bracket.1 - report.bracket.0 <= tol);
        // the two sides differ by φ' · width / 2 besides the π step
        prop_assert!((report.magnitude.abs() - PI).abs() <= rate * tol / 2.0 + 1e-12);
        if tol <= 1e-8 {
            prop_assert!((report.magnitude.abs() - PI).abs() < 1e-6);
        }
        prop_assert!(report.magnitude > -2.0 * PI && report.magnitude < 2.0 * PI);
    }

    #[test]
    fn cp_potential_is_monotone(
        eps in 1.0f64..20.0, de in 1e-3f64..1.0,
        r in 1e-7f64..1e-5, dr in 1e-9f64..1e-6,
        d in 1e-4f64..1e-3, dd in 1e-6f64..1e-4,
    ) {
        let base = cp_potential(&CpParams::new(r, d, eps)).unwrap().abs();
        prop_assert!(cp_potential(&CpParams::new(r, d, eps + de)).unwrap().abs() > base || eps == 1.0 && base == 0.0);
        prop_assume!(eps > 1.0);
        prop_assert!(cp_potential(&CpParams::new(r + dr, d, eps)).unwrap().abs() > base);
        prop_assert!(cp_potential(&CpParams::new(r, d + dd, eps)).unwrap().abs() < base);
    }

    #[test]
    fn calibration_scales_with_square_root(s in 1e-9f64..1e-3, k in 0.1f64..10.0) {
        let p = ExperimentParams { m0: 5e-17, ..ExperimentParams::default() };
        let base = calibrate(&p, s).unwrap().min_m0;
        let scaled = calibrate(&p, s * k * k).unwrap().min_m0;
        prop_assert!((scaled - k * base).abs() <= 1e-12 * scaled);
    }
}

#[test]
fn closed_forms_match_overlap_route_on_grid() {
    let initial = two_qubit_state(0.0, 0.0).unwrap();
    let reference = single_qubit_superposition(0.0).unwrap();
    let axis: Vec<f64> = (0..64)
        .map(|i| -2.0 * PI + 4.0 * PI * i as f64 / 63.0)
        .collect();
    let mut compared = 0;
    for &p1 in &axis {
        for &p2 in &axis {
            let overlap = pancharatnam_phase(
                initial.as_pure(),
                two_qubit_state(p1, p2).unwrap().as_pure(),
            );
            match (phase_quantum_closed(p1, p2), overlap) {
                (Ok(a), Ok(b)) => {
                    assert!((a - b).abs() < 1e-12, "({p1}, {p2}): {a} vs {b}");
                    compared += 1;
                }
                (Err(_), Err(_)) => {}
                (a, b) => panic!("routes disagree on definedness at ({p1}, {p2}): {a:?} {b:?}"),
            }
        }
        let single = pancharatnam_phase(&reference, &single_qubit_superposition(p1).unwrap());
        match (phase_classical_closed(p1), single) {
            (Ok(a), Ok(b)) => assert!((a - b).abs() < 1e-12, "{p1}: {a} vs {b}"),
            (Err(_), Err(_)) => {}
            (a, b) => panic!("routes disagree on definedness at {p1}: {a:?} {b:?}"),
        }
    }
    assert!(compared > 4000);
}

#[test]
fn weak_field_phases_follow_first_order_expansion() {
    let p = ExperimentParams {
        m0: 5e-16,
        ..ExperimentParams::default()
    };
    let (d, dx) = (p.d, p.dx);
    let expected_ratio = dx * (d * d - dx * dx / 4.0) / (d * (d * d - dx * dx));
    for i in 1..=10 {
        let t = 0.15 * i as f64;
        let (phi1, phi2) = branch_phases(&p, t).unwrap();
        let phi = semiclassical_phase(&p, t).unwrap();
        assert!(phi1.abs() < 1e-2);
        let q = model_phase(&p, Model::Quantum, t).unwrap().unwrap();
        let c = model_phase(&p, Model::Semiclassical, t).unwrap().unwrap();
        assert!((q / ((phi1 + phi2) / 4.0) - 1.0).abs() < 0.01);
        assert!((c / (phi / 2.0) - 1.0).abs() < 0.01);
        assert!((q / c / expected_ratio - 1.0).abs() < 0.01);
    }
}

#[test]
fn no_false_jumps_in_quantum_model() {
    for coupling in [CouplingConvention::M0Squared, CouplingConvention::M0TimesM] {
        let p = ExperimentParams::default().with_coupling(coupling);
        for threshold in [0.5, 1.0, 2.0] {
            let opts = gravwitness_core::analysis::ScanOptions {
                points: 2000,
                threshold,
            };
            let found = gravwitness_core::analysis::find_phase_jump_with(
                &p,
                Model::Quantum,
                (0.0, p.t_total),
                1e-6,
                &opts,
            )
            .unwrap();
            assert_eq!(found, None);
        }
    }
}
