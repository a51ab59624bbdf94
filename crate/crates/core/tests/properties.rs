use std::f64::consts::PI;

use freqwalk_core::band::{closed_form_mismatch, eigen_spinor, uk_matrix, Branch};
use freqwalk_core::gates::{prepare_state_sequence, sequence_matrix, state_fidelity, QubitState};
use freqwalk_core::kernel::translation_kernel;
use freqwalk_core::two_qubit::{reconstruct_4x4, TwoQubitGate};
use freqwalk_core::{Boundary, Engine, LatticeConfig, LatticeState, ModulationParams, Polarization, Stepper, WavepacketSpec, C64};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModulationParams> {
    (0.0..3.0 * PI, -PI..PI, -PI..PI, -2.0 * PI..2.0 * PI).prop_map(|(g, h, v, t)| ModulationParams::new(g, h, v, t).unwrap())
}

fn spinor() -> impl Strategy<Value = [C64; 2]> {
    (0.05..1.0f64, 0.0..1.0f64, -PI..PI).prop_map(|(a, b, ph)| [C64::new(a, 0.0), C64::from_polar(b, ph)])
}

fn packet(half: usize, delta: f64, q: f64, spin: [C64; 2], boundary: Boundary) -> LatticeState {
    let cfg = LatticeConfig::new(half, boundary).unwrap();
    LatticeState::make_gaussian(&WavepacketSpec::new(delta, q, spin).unwrap(), cfg).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_step_is_unitary(p in params(), q in -PI..PI, spin in spinor(), delta in 2.0..12.0f64) {
        let s = packet(80, delta, q, spin, Boundary::Periodic);
        let mut stepper = Stepper::new(*s.config(), Engine::Spectral);
        let mut cur = s;
        for _ in 0..20 {
            cur = stepper.step(&cur, &p).unwrap().0;
            prop_assert!((cur.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_modes_evolve_by_the_2x2_matrix(p in params(), q in -PI..PI, spin in spinor(), k in 0usize..121) {
        let s = packet(60, 6.0, q, spin, Boundary::Periodic);
        let out = Stepper::new(*s.config(), Engine::Spectral).step(&s, &p).unwrap().0;
        let qk = 2.0 * PI * k as f64 / 121.0;
        let want = uk_matrix(&p, qk).matrix.apply(&s.q_component(qk));
        let got = out.q_component(qk);
        prop_assert!((got[0] - want[0]).norm() < 1e-11 && (got[1] - want[1]).norm() < 1e-11);
    }

    #[test]
    fn engines_agree_on_interior_states(p in params(), q in -PI..PI, spin in spinor()) {
        let open = packet(150, 8.0, q, spin, Boundary::Truncated);
        let ring = LatticeState::from_raw(
            LatticeConfig::periodic(150).unwrap(),
            open.component(Polarization::H).to_vec(),
            open.component(Polarization::V).to_vec(),
        ).unwrap();
        let direct = Stepper::new(*open.config(), Engine::Direct).with_kernel_tol(1e-20).unwrap().step(&open, &p).unwrap();
        let spectral = Stepper::new(*ring.config(), Engine::Spectral).step(&ring, &p).unwrap();
        prop_assert!(direct.0.max_abs_diff(&spectral.0).unwrap() < 1e-8);
        prop_assert!(direct.1 < 1e-12);
    }

    #[test]
    fn kernel_power_within_tolerance(g in 0.0..40.0f64, phi in -PI..PI, e in 6.0..16.0f64) {
        let tol = 10f64.powf(-e);
        let k = translation_kernel(g, phi, tol).unwrap();
        let power = k.power();
        // the Bessel values themselves carry about 1e-15 of error
        prop_assert!(power <= 1.0 + 4e-15 && power >= 1.0 - tol - 4e-15);
        prop_assert!(k.tail_bound() < tol);
    }

    #[test]
    fn closed_form_matches_matrix(p in params(), q in -PI..PI) {
        prop_assert!(closed_form_mismatch(&p, q) < 1e-10);
    }

    #[test]
    fn eigen_spinors_are_eigenvectors(p in params(), q in -PI..PI) {
        let m = uk_matrix(&p, q).matrix;
        for branch in [Branch::Plus, Branch::Minus] {
            if let Ok(v) = eigen_spinor(&p, q, branch) {
                let w = m.apply(&v);
                let lambda = w[0] * v[0].conj() + w[1] * v[1].conj();
                prop_assert!((lambda.norm() - 1.0).abs() < 1e-10);
                prop_assert!((w[0] - lambda * v[0]).norm() < 1e-9 && (w[1] - lambda * v[1]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn preparation_product_matches_target(p1 in 0.0..PI, p2 in -PI..PI, q in -PI..PI) {
        let out = sequence_matrix(&prepare_state_sequence(p1, p2, q).unwrap(), q).column(0);
        let f = state_fidelity(&out, &QubitState::from_angles(p1, p2).amplitudes()).unwrap();
        prop_assert!(f > 1.0 - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn register_lattice_matches_matrix_product(ops in prop::collection::vec(prop_oneof![
        Just(TwoQubitGate::Cnot),
        Just(TwoQubitGate::PathX),
        Just(TwoQubitGate::Identity),
    ], 0..=4)) {
        let report = reconstruct_4x4(&ops, 200.0, 2.0 * PI / 3.0, Engine::Spectral).unwrap();
        prop_assert!(report.max_entry_error < 1e-3);
        prop_assert!(report.reconstructed.unitarity_error() < 1e-9);
    }
}
