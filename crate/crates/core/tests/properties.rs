mod common;

use approx::assert_abs_diff_eq;
use esd_core::dynamics::{build_liouvillian, master_rhs, unvectorize, vectorize, CouplingParams};
use esd_core::metrics::{concurrence_collective, concurrence_wootters, concurrence_x};
use esd_core::operator::{c, CMat4};
use esd_core::state::{
    from_dicke, linear_entropy, to_dicke, werner, werner_p_from_linear_entropy, BellKind, DensityMatrix, StateSpec,
};
use esd_core::switching::{apply_switch, GateSpec, Pauli, TwoQubitGate, XReading};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn x_state(seed: u64) -> DensityMatrix {
    common::random_x_state(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn any_state(seed: u64) -> DensityMatrix {
    common::random_state(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn kind() -> impl Strategy<Value = BellKind> {
    prop_oneof![Just(BellKind::PhiPlus), Just(BellKind::PhiMinus), Just(BellKind::PsiPlus), Just(BellKind::PsiMinus)]
}

fn couplings() -> impl Strategy<Value = CouplingParams> {
    (-1.0..1.0f64, -3.0..3.0f64, -2.0..2.0f64)
        .prop_map(|(g, o, w)| CouplingParams::new(g, o).unwrap().with_omega0(w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn superoperator_matches_operator_form(p in couplings(), seed in any::<u64>()) {
        let l = build_liouvillian(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = *common::random_state(&mut rng).matrix();
        prop_assert!(l.apply(&m).max_abs_diff(&master_rhs(&p, &m)) < 1e-13);
    }

    #[test]
    fn generator_is_traceless_and_hermiticity_preserving(p in couplings(), seed in any::<u64>()) {
        let l = build_liouvillian(&p).unwrap();
        let rho = *any_state(seed).matrix();
        let d = l.apply(&rho);
        prop_assert!(d.trace().norm() < 1e-13);
        prop_assert!(d.hermiticity_defect() < 1e-13);
    }

    #[test]
    fn rk4_step_keeps_x_states_valid(p in couplings(), seed in any::<u64>(), h in 1e-5..1e-2f64) {
        let l = build_liouvillian(&p).unwrap();
        let v = l.rk4_step(&vectorize(x_state(seed).matrix()), h);
        let m = unvectorize(&v);
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(m.hermiticity_defect() < 1e-14);
        prop_assert!(esd_core::state::x_leakage(&m) == 0.0);
    }

    #[test]
    fn closed_form_agrees_with_wootters(seed in any::<u64>()) {
        let rho = x_state(seed);
        let w = concurrence_wootters(&rho).unwrap();
        prop_assert!((w - concurrence_x(&rho).unwrap().c).abs() < 1e-9);
    }

    #[test]
    fn collective_breakdown_agrees(seed in any::<u64>()) {
        let rho = x_state(seed);
        let a = concurrence_x(&rho).unwrap();
        let b = concurrence_collective(&to_dicke(&rho)).unwrap();
        prop_assert!((a.c1 - b.c1).abs() < 1e-9 && (a.c2 - b.c2).abs() < 1e-9);
    }

    #[test]
    fn dicke_transform_round_trips(seed in any::<u64>()) {
        let rho = any_state(seed);
        prop_assert!(from_dicke(&to_dicke(&rho)).matrix().max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn local_gates_preserve_concurrence(
        seed in any::<u64>(),
        t1 in 0.0..std::f64::consts::PI, f1 in 0.0..std::f64::consts::FRAC_PI_2,
        t2 in 0.0..std::f64::consts::PI, f2 in 0.0..std::f64::consts::FRAC_PI_2,
    ) {
        let rho = any_state(seed);
        let gate = TwoQubitGate {
            first: GateSpec::Parametrized { theta: t1, phi: f1 },
            second: GateSpec::Parametrized { theta: t2, phi: f2 },
            x_reading: XReading::SigmaX,
        };
        let after = apply_switch(&rho, &gate).unwrap();
        let (a, b) = (concurrence_wootters(&rho).unwrap(), concurrence_wootters(&after).unwrap());
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((after.purity() - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn pauli_switch_twice_is_identity(seed in any::<u64>(), a in pauli(), b in pauli(), y in any::<bool>()) {
        let reading = if y { XReading::SigmaY } else { XReading::SigmaX };
        let gate = TwoQubitGate::named(a, b).with_reading(reading);
        let rho = any_state(seed);
        let back = apply_switch(&apply_switch(&rho, &gate).unwrap(), &gate).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn pauli_switch_keeps_x_form(seed in any::<u64>(), a in pauli(), b in pauli()) {
        let after = apply_switch(&x_state(seed), &TwoQubitGate::named(a, b)).unwrap();
        prop_assert!(after.is_x_form());
    }

    #[test]
    fn werner_concurrence_formula(k in kind(), p in 0.0..1.0f64) {
        let c = concurrence_wootters(&werner(k, p).unwrap()).unwrap();
        prop_assert!((c - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs() < 1e-9);
    }

    #[test]
    fn linear_entropy_inverts(k in kind(), p in 0.0..1.0f64) {
        let sl = linear_entropy(&werner(k, p).unwrap());
        prop_assert!((werner_p_from_linear_entropy(sl).unwrap() - p).abs() < 1e-9);
    }

    #[test]
    fn state_spec_display_round_trips(k in kind(), p in 0.0..1.0f64, x in 0.0..1.73f64, two in any::<bool>()) {
        let specs = [
            format!("bell:{k}"),
            format!("werner:{k}:p={p}"),
            format!("{}:x={x}", if two { "x2" } else { "x1" }),
        ];
        for s in specs {
            let spec: StateSpec = s.parse().unwrap();
            prop_assert_eq!(spec.to_string().parse::<StateSpec>().unwrap(), spec);
        }
    }
}

#[test]
fn hermitian_eigen_reconstructs_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let rho = common::random_state(&mut rng);
        let e = esd_core::operator::hermitian_eigen(rho.matrix()).unwrap();
        let rebuilt = e.map_spectrum(|x| x);
        assert!(rebuilt.max_abs_diff(rho.matrix()) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        assert_abs_diff_eq!(e.values.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn non_hermitian_input_rejected() {
    let mut m = CMat4::identity();
    m.0[0][1] = c(0.5, 0.0);
    assert!(esd_core::operator::hermitian_eigen(&m).is_err());
}
