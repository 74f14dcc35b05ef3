use ampsample::backends::{
    clifford_amplitude, stabilizer_decompose, AmplitudeOracle, PathSumOracle, StabDecompOracle,
    StatevectorOracle,
};
use ampsample::circuit::random::{
    random_adaptive_circuit, random_circuit, random_clifford_circuit, random_clifford_t_circuit,
    random_permutation_circuit,
};
use ampsample::circuit::{Circuit, GateClass};
use ampsample::rng::seeded;
use ampsample::statevector::simulate;
use ampsample::{BitString, Complex64};
use proptest::prelude::*;

fn max_diff(a: &mut dyn AmplitudeOracle, b: &mut dyn AmplitudeOracle) -> f64 {
    let n = a.num_qubits();
    let mut worst = 0.0f64;
    for t in 0..=a.num_gates() {
        for x in BitString::iter_all(n) {
            let d = (a.amplitude(t, x).unwrap() - b.amplitude(t, x).unwrap()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

#[test]
fn pathsum_matches_statevector_on_random_circuits() {
    let mut rng = seeded(11);
    for _ in 0..50 {
        let c = random_circuit(4, 8, 2, &mut rng);
        let mut sv = StatevectorOracle::new(&c).unwrap();
        let mut ps = PathSumOracle::new(&c);
        assert!(max_diff(&mut sv, &mut ps) <= 1e-9);
    }
}

#[test]
fn pathsum_matches_statevector_on_adaptive_circuits() {
    let mut rng = seeded(12);
    for _ in 0..30 {
        let c = random_adaptive_circuit(5, 14, 2, &mut rng);
        let mut sv = StatevectorOracle::new(&c).unwrap();
        let mut ps = PathSumOracle::with_memo_budget(&c, 0);
        assert!(max_diff(&mut sv, &mut ps) <= 1e-9);
    }
}

#[test]
fn clifford_amplitudes_match_statevector() {
    let mut rng = seeded(13);
    for _ in 0..100 {
        let c = random_clifford_circuit(6, 30, &mut rng);
        let psi = simulate(&c, c.len()).unwrap();
        for x in BitString::iter_all(6) {
            let a = clifford_amplitude(&c, x).unwrap();
            assert!((a - psi[x.index()]).norm() <= 1e-9, "{c:?} {x}");
        }
    }
}

/// Builds `2^n × 2^n` matrices gate by gate and multiplies them, an
/// evaluation route independent of the in-place kernels.
fn dense_product(c: &Circuit) -> Vec<Vec<Complex64>> {
    let dim = 1usize << c.num_qubits();
    let mut acc: Vec<Vec<Complex64>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|k| Complex64::new((r == k) as u8 as f64, 0.0))
                .collect()
        })
        .collect();
    for g in c.gates() {
        let mut full = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for (col, row_out) in (0..dim).map(|col| (col, BitString::from_index(col, c.num_qubits())))
        {
            let v = row_out.restrict(g.support()) as usize;
            for r in 0..g.dim() {
                let y = row_out.with_restriction(g.support(), r as u64).index();
                full[y][col] = g.entry(r, v);
            }
        }
        acc = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| (0..dim).map(|k| full[i][k] * acc[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    acc
}

#[test]
fn clifford_global_phase_against_matrix_products() {
    let mut rng = seeded(14);
    for n in 1..=4 {
        for _ in 0..40 {
            let c = random_clifford_circuit(n, 20, &mut rng);
            let u = dense_product(&c);
            for x in BitString::iter_all(n) {
                let a = clifford_amplitude(&c, x).unwrap();
                assert!((a - u[x.index()][0]).norm() <= 1e-9);
            }
        }
    }
}

#[test]
fn stabdecomp_matches_statevector() {
    let mut rng = seeded(15);
    for l in 0..=6 {
        for _ in 0..6 {
            let c = random_clifford_t_circuit(5, 24, l, &mut rng);
            let mut sv = StatevectorOracle::new(&c).unwrap();
            let mut sd = StabDecompOracle::new(&c).unwrap();
            assert!(max_diff(&mut sv, &mut sd) <= 1e-9);
            for t in 0..=c.len() {
                assert_eq!(sd.term_count(t).unwrap(), 1 << c.t_count(t));
            }
        }
    }
}

#[test]
fn decomposition_terms_recombine() {
    let mut rng = seeded(16);
    let c = random_clifford_t_circuit(3, 12, 3, &mut rng);
    let terms = stabilizer_decompose(&c).unwrap();
    for (t, prefix_terms) in terms.iter().enumerate() {
        assert!(prefix_terms.len() <= 8);
        let psi = simulate(&c, t).unwrap();
        for x in BitString::iter_all(3) {
            let a: Complex64 = prefix_terms
                .iter()
                .map(|s| s.coefficient * clifford_amplitude(&s.clifford, x).unwrap())
                .sum();
            assert!((a - psi[x.index()]).norm() <= 1e-12);
        }
    }
}

#[test]
fn normalization_for_every_prefix() {
    let mut rng = seeded(17);
    for n in [3, 6, 10] {
        let c = random_circuit(n, 12, 2, &mut rng);
        for t in 0..=c.len() {
            let norm: f64 = simulate(&c, t).unwrap().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn call_counter_is_exact() {
    let mut rng = seeded(18);
    let c = random_circuit(3, 5, 2, &mut rng);
    let mut o = PathSumOracle::new(&c);
    let mut expect = vec![0u64; 6];
    for i in 0..37usize {
        let t = (i * 7) % 6;
        o.amplitude(t, BitString::from_index(i % 8, 3)).unwrap();
        expect[t] += 1;
    }
    assert_eq!(o.calls().per_prefix(), expect.as_slice());
    assert_eq!(o.calls().total(), 37);
}

#[test]
fn permutation_circuits_follow_basis_action() {
    let mut rng = seeded(19);
    for n in 1..=6 {
        for _ in 0..5 {
            let c = random_permutation_circuit(n, 15, &mut rng);
            let mut sv = StatevectorOracle::new(&c).unwrap();
            for x in BitString::iter_all(n) {
                let (mut y, mut phase) = (x, Complex64::new(1.0, 0.0));
                for g in c.gates() {
                    assert_ne!(g.class(), GateClass::General);
                    let (y2, p) = g.apply_permutation(y).unwrap();
                    y = y2;
                    phase *= p;
                }
                // U|x⟩ = phase |y⟩: prepare |x⟩ by prepending X gates.
                let mut prep = Circuit::new(n);
                for q in 0..n {
                    if x.get(q) {
                        prep.push(ampsample::Gate::x(q)).unwrap();
                    }
                }
                for g in c.gates() {
                    prep.push(g.clone()).unwrap();
                }
                let psi = simulate(&prep, prep.len()).unwrap();
                assert!((psi[y.index()] - phase).norm() < 1e-12);
                let _ = sv.amplitude(0, x).unwrap();
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_serialization(seed in any::<u64>(), n in 1usize..6, m in 0usize..15) {
        let mut rng = seeded(seed);
        let c = random_circuit(n, m, 3.min(n), &mut rng);
        let text = c.to_text().unwrap();
        prop_assert_eq!(ampsample::circuit::parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn adaptive_round_trip(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let c = random_adaptive_circuit(4, 12, 2, &mut rng);
        let (main, tables) = c.to_files("c");
        let tables: std::collections::HashMap<_, _> = tables.into_iter().collect();
        let mut load = |name: &str| Ok(tables[name].clone());
        prop_assert_eq!(ampsample::circuit::parse_circuit_with(&main, &mut load).unwrap(), c);
    }

    #[test]
    fn classification_invariant_under_global_phase(seed in any::<u64>(), theta in 0.0f64..6.3) {
        let mut rng = seeded(seed);
        let c = random_circuit(3, 6, 3, &mut rng);
        let phase = Complex64::from_polar(1.0, theta);
        for g in c.gates() {
            let m = g.matrix().iter().map(|z| z * phase).collect();
            let h = ampsample::Gate::from_matrix(m, g.support().to_vec(), "p").unwrap();
            prop_assert_eq!(h.class(), g.class());
        }
    }
}
