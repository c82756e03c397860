mod common;

use common::*;
use proptest::prelude::*;
use zne_core::circuit::{contract_single_qubit_gates, fold_cnots, invert, parse_circuit, serialize_circuit, twirl, Adjacency};
use zne_core::linalg::{diff_up_to_phase, is_unitary};
use zne_core::mitigation::estimate_epsilon;
use zne_core::noise::{build_standard_model, coherent_cx_model, pauli_channel, pauli_transfer_matrix};
use zne_core::seed::rng_from;
use zne_core::simulator::{run_exact, run_ideal, KrausChannel};
use zne_core::PauliString;

fn circuit(seed: u64) -> zne_core::Circuit {
    random_circuit(&mut rng_from(&[seed]), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn text_round_trip(seed in any::<u64>(), lambda in prop::sample::select(vec![1i64, 3, 5])) {
        let c = fold_cnots(&circuit(seed), lambda).unwrap();
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn transforms_preserve_unitary(seed in any::<u64>(), lambda in prop::sample::select(vec![3i64, 5, 7])) {
        let c = circuit(seed);
        let u = c.unitary();
        prop_assert!(is_unitary(&u, 1e-10));
        prop_assert!(diff_up_to_phase(&fold_cnots(&c, lambda).unwrap().unitary(), &u) < 1e-10);
        let t = twirl(&c, &mut rng_from(&[seed, 1]), &Adjacency::new());
        prop_assert_eq!(t.cx_count(), c.cx_count());
        prop_assert!(diff_up_to_phase(&t.unitary(), &u) < 1e-10);
        prop_assert!(diff_up_to_phase(&contract_single_qubit_gates(&t).unitary(), &u) < 1e-10);
        let mut both = c.clone();
        both.extend_from(&invert(&c)).unwrap();
        let n = c.num_qubits();
        prop_assert!(diff_up_to_phase(&both.unitary(), &CMatrix::identity(1 << n, 1 << n)) < 1e-10);
    }

    #[test]
    fn noisy_evolution_stays_physical(seed in any::<u64>(), rate in 0.0f64..0.3, angle in -0.5f64..0.5) {
        let c = circuit(seed);
        for nm in [build_standard_model(rate).unwrap(), coherent_cx_model(angle).unwrap()] {
            let rho = run_exact(&c, &nm).unwrap();
            let phys = rho.physicality();
            prop_assert!(phys.trace_error < 1e-12 && phys.hermiticity_error < 1e-12 && phys.min_eigenvalue > -1e-12);
        }
        let rho = run_exact(&c, &build_standard_model(0.0).unwrap()).unwrap();
        let psi = run_ideal(&c);
        prop_assert!(max_diff(rho.matrix(), &zne_core::linalg::pure_state(&psi)) < 1e-12);
    }

    #[test]
    fn pauli_channels_are_cptp(w in prop::collection::vec(0.0f64..1.0, 16), total in 0.0f64..0.9) {
        let s: f64 = w[1..].iter().sum::<f64>().max(1e-12);
        let mut probs: Vec<f64> = w.iter().map(|x| x / s * total).collect();
        probs[0] = 1.0 - total;
        let weights: Vec<(PauliString, f64)> = PauliString::all(2).into_iter().zip(probs).collect();
        let ch = pauli_channel(&weights).unwrap();
        // Re-validating the operators runs the completeness check.
        prop_assert!(KrausChannel::new(2, ch.operators().to_vec()).is_ok());
        let ptm = pauli_transfer_matrix(&ch);
        prop_assert!((ptm[(0, 0)] - 1.0).abs() < 1e-12);
        for i in 0..16 {
            for j in 0..16 {
                if i != j {
                    prop_assert!(ptm[(i, j)].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn epsilon_decreases_in_p0(q in 1usize..=6, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let e_lo = estimate_epsilon(lo, q).unwrap().epsilon;
        let e_hi = estimate_epsilon(hi, q).unwrap().epsilon;
        prop_assert!(e_hi <= e_lo + 1e-15);
        prop_assert!((0.0..=1.0).contains(&e_lo));
    }
}
