//! Randomized invariants of the channel, the oracle and the engine.

use graphlind::dense::{build_liouvillian, dense_expectation, dense_osee, evolve_dense, HamiltonianSpec};
use graphlind::engine::{channel_from_generator, make_channel, max_entry_diff, run, zz_superoperator, Schedule};
use graphlind::graph::{build_pure_mps, build_state_vector, cz_fan, make_complete, make_ring, make_star, GraphSpec};
use graphlind::linalg::projector;
use graphlind::mps::TruncationPolicy;
use graphlind::oracle::{expectation, rates_from_g, Rates, WordSignature};
use graphlind::pauli::{PauliAxis, PauliWord};
use graphlind::vectorized::VectorizedState;
use nalgebra::DVector;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn rates() -> impl Strategy<Value = Rates> {
    (0.0..2.0f64, 0.0..2.0f64, 0.0..1.0f64)
        .prop_filter("some decay", |(a, b, c)| a + b + c > 1e-3)
        .prop_map(|(a, b, c)| rates_from_g(a, b, c).unwrap())
}

fn word(n: usize) -> impl Strategy<Value = PauliWord> {
    prop::collection::vec(0..4usize, n).prop_map(move |axes| {
        PauliWord::new(n, axes.iter().enumerate().map(|(i, &a)| (i + 1, PauliAxis::from_index(a)))).unwrap()
    })
}

fn graph_state(g: &GraphSpec) -> VectorizedState {
    VectorizedState::from_graph(g, &TruncationPolicy::default()).unwrap()
}

fn matmul16(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 256];
    for i in 0..16 {
        for k in 0..16 {
            let x = a[i * 16 + k];
            for j in 0..16 {
                out[i * 16 + j] += x * b[k * 16 + j];
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn channel_is_cptp_and_matches_generator(r in rates(), tau in 1e-3..2.0f64) {
        let ch = make_channel(&r, tau).unwrap();
        prop_assert!(ch.choi_min_eigenvalue() > -1e-12);
        prop_assert_eq!(&ch.matrix[..4], &[1.0, 0.0, 0.0, 0.0][..]);
        let from_generator = channel_from_generator(&r, tau).unwrap();
        prop_assert!(max_entry_diff(&ch.matrix, &from_generator) < 1e-12);
    }

    #[test]
    fn oracle_factorizes(r in rates(), t in 0.0..6.0f64, m in 0..4usize, l in 0..5usize) {
        let n = 24;
        let yy = expectation(WordSignature::new(0, 2, 0, n).unwrap(), t, &r).unwrap();
        let z = expectation(WordSignature::new(0, 0, 1, n).unwrap(), t, &r).unwrap();
        let v = expectation(WordSignature::new(0, 2 * m, l, n).unwrap(), t, &r).unwrap();
        prop_assert!((v - yy.powi(m as i32) * z.powi(l as i32)).abs() < 1e-12);
    }

    #[test]
    fn two_zz_half_steps_make_a_full_step(j in -2.0..2.0f64, dt in 0.0..1.0f64) {
        let half = zz_superoperator(j, dt / 2.0);
        let full = zz_superoperator(j, dt);
        prop_assert!(max_entry_diff(&matmul16(&half, &half), &full) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn engine_preserves_trace_and_symmetry(r in rates(), w in word(6), shift in 1..6usize) {
        let n = 6;
        let sched = Schedule::sampled(0.01, 1.0, 0.25, vec![], vec![]).unwrap();
        let mut state = graph_state(&make_complete(n).unwrap());
        let p = TruncationPolicy::default();
        let ts = run(&state, &r, &HamiltonianSpec::None, &sched, &p).unwrap();
        prop_assert!(ts.trace.iter().all(|t| (t - 1.0).abs() < 1e-12));
        let prop = graphlind::engine::Propagator::new(n, &r, &HamiltonianSpec::None, 0.01).unwrap();
        for _ in 0..50 {
            graphlind::engine::step(&mut state, &prop, &p).unwrap();
        }
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n + 1).collect();
        let moved = w.permuted(&perm).unwrap();
        prop_assert!((state.measure_word(&w).unwrap() - state.measure_word(&moved).unwrap()).abs() < 1e-13);
        for cut in 1..n {
            let a = state.osee(cut).unwrap();
            let b = state.osee(n - cut).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn engine_matches_dense_on_sparse_graphs(r in rates(), star in any::<bool>(), n in 3..=5usize, w in word(5)) {
        let g = if star { make_star(n).unwrap() } else { make_ring(n).unwrap() };
        let w = PauliWord::new(n, w.iter().filter(|(s, _)| *s <= n)).unwrap();
        let rho0 = projector(&build_state_vector(&g).unwrap());
        let l = build_liouvillian(n, &r, &HamiltonianSpec::None).unwrap();
        let sched = Schedule::sampled(0.01, 1.0, 0.5, vec![w.clone()], vec![n / 2]).unwrap();
        let ts = run(&graph_state(&g), &r, &HamiltonianSpec::None, &sched, &TruncationPolicy::default()).unwrap();
        for (k, t) in ts.times.iter().enumerate() {
            let exact = evolve_dense(&rho0, &l, *t).unwrap();
            prop_assert!((ts.values[k][0] - dense_expectation(&exact, &w).unwrap()).abs() < 1e-10);
            prop_assert!((ts.osee[k][0] - dense_osee(&exact, n / 2).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn ising_engine_converges_to_dense() {
    let n = 4;
    let r = rates_from_g(0.9, 0.1, 0.1).unwrap();
    let h = HamiltonianSpec::IsingPair { a: 2, b: 3, coupling: 1.0 };
    let g = make_complete(n).unwrap();
    let rho0 = projector(&build_state_vector(&g).unwrap());
    let exact = evolve_dense(&rho0, &build_liouvillian(n, &r, &h).unwrap(), 0.8).unwrap();
    let words: Vec<PauliWord> = ["Y1 Y2", "Z1", "X1 Z2 Z3 Z4", "Y2 Y3"].iter().map(|s| PauliWord::parse(s, n).unwrap()).collect();
    let mut errors = Vec::new();
    for tau in [0.04, 0.02] {
        let sched = Schedule::sampled(tau, 0.8, 0.8, words.clone(), vec![]).unwrap();
        let ts = run(&graph_state(&g), &r, &h, &sched, &TruncationPolicy::default()).unwrap();
        let last = ts.values.last().unwrap();
        let err = words.iter().zip(last).map(|(w, v)| (v - dense_expectation(&exact, w).unwrap()).abs()).fold(0.0, f64::max);
        errors.push(err);
    }
    assert!(errors[1] < 1e-4, "{errors:?}");
    // second order: halving tau quarters the error
    assert!(errors[0] / errors[1] > 3.0, "{errors:?}");
}

#[test]
fn ring_cz_layer_is_an_involution() {
    let n = 7;
    let g = make_ring(n).unwrap();
    let (mut psi, _) = build_pure_mps(&g, &TruncationPolicy::default()).unwrap();
    let mut mps = psi.mps().clone();
    for v in 1..=n {
        let targets: Vec<usize> = g.neighbors(v).into_iter().filter(|&w| w > v).collect();
        if !targets.is_empty() {
            mps.apply_mpo_exact(&cz_fan(n, v, &targets).unwrap()).unwrap();
        }
    }
    psi = graphlind::graph::PureMps::from_mps(mps).unwrap();
    let plus = DVector::from_element(1 << n, C64::new((0.5f64).powf(n as f64 / 2.0), 0.0));
    assert!((psi.fidelity(&plus) - 1.0).abs() < 1e-12);
}
