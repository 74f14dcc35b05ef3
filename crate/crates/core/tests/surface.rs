use std::collections::BTreeMap;

use ampsample::rng::seeded;
use ampsample::samplers::{tv_distance, Distribution};
use ampsample::surface::*;
use ampsample::{BitString, Circuit, Complex64, Gate};
use proptest::prelude::*;
use rand::Rng;

fn random_qubit<R: Rng>(rng: &mut R) -> Qubit {
    let mut q = [
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
    ];
    let n = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
    q.iter_mut().for_each(|a| *a /= n);
    q
}

/// All cycles by testing every edge subset.
fn cycles_by_subsets(g: &PlanarGraph) -> Vec<u64> {
    (0..1u64 << g.num_edges())
        .filter(|&x| g.is_cycle(x))
        .collect()
}

#[test]
fn cycle_space_dimensions() {
    let sq = polygon(4);
    assert_eq!(sq.cycle_space_basis(), &[0b1111]);
    assert_eq!(grid(2, 3).unwrap().num_edges(), 7);
    assert_eq!(grid(2, 3).unwrap().cycle_space_dim(), 2);
    let g = grid(3, 3).unwrap();
    assert_eq!(g.cycle_space_dim(), 4);
    assert_eq!(g.num_edges() - g.num_vertices() + 1, 4);
    assert_eq!(cycles_by_subsets(&g).len(), 16);
}

#[test]
fn face_validation() {
    let edges = (0..4)
        .map(|i| Edge::new(i, (i + 1) % 4))
        .collect::<Vec<_>>();
    let g = PlanarGraph::new(4, edges.clone()).unwrap();
    assert!(matches!(
        g.clone().with_faces(vec![vec![0, 1, 2]]),
        Err(ampsample::Error::FaceNotCycle { face: 0 })
    ));
    assert!(matches!(
        g.with_faces(vec![]),
        Err(ampsample::Error::RankDeficient { rank: 0, dim: 1 })
    ));
    let two = grid(2, 3).unwrap();
    let partial = PlanarGraph::new(two.num_vertices(), two.edges().to_vec())
        .unwrap()
        .with_faces(vec![(0..64)
            .filter(|j| two.faces().unwrap()[0] >> j & 1 == 1)
            .collect()]);
    assert!(matches!(
        partial,
        Err(ampsample::Error::RankDeficient { rank: 1, dim: 2 })
    ));
}

#[test]
fn enumeration_matches_subset_search() {
    for g in [polygon(5), grid(2, 3).unwrap(), grid(3, 3).unwrap()] {
        let mut seen = Vec::new();
        g.for_each_cycle(20, |x| seen.push(x)).unwrap();
        seen.sort_unstable();
        assert_eq!(seen, cycles_by_subsets(&g));
    }
}

#[test]
fn sampled_cycles_are_uniform() {
    let mut rng = seeded(1);
    let draws = 100_000;
    let sq = polygon(4);
    let ones = (0..draws)
        .filter(|_| sq.sample_cycle(&mut rng).bits() == 0b1111)
        .count();
    assert!((ones as f64 / draws as f64 - 0.5).abs() <= 0.02);

    let g = grid(2, 3).unwrap();
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for _ in 0..draws {
        let x = g.sample_cycle(&mut rng);
        assert!(g.is_cycle(x.bits()));
        *counts.entry(x.bits()).or_default() += 1;
    }
    assert_eq!(counts.len(), 4);
    for c in counts.values() {
        assert!((*c as f64 / draws as f64 - 0.25).abs() <= 0.02);
    }

    let tree = PlanarGraph::new(3, vec![Edge::new(0, 1), Edge::new(1, 2)])
        .unwrap()
        .with_faces(vec![])
        .unwrap();
    for _ in 0..100 {
        assert_eq!(tree.sample_cycle(&mut rng).bits(), 0);
    }
}

#[test]
fn basis_state_overlaps() {
    for g in [polygon(4), grid(2, 3).unwrap(), grid(3, 3).unwrap()] {
        let n = g.num_edges();
        let expect = 1.0 / (g.num_cycles() as f64).sqrt();
        for x in 0..1u64 << n {
            let phi: Vec<Qubit> = (0..n).map(|j| basis_qubit(x >> j & 1 == 1)).collect();
            let v = product_state_overlap(&g, &phi).unwrap();
            let want = if g.is_cycle(x) { expect } else { 0.0 };
            assert!((v - want).norm() < 1e-14);
        }
    }
}

#[test]
fn plus_state_overlap_closed_form() {
    let g = grid(3, 3).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let phi = vec![[Complex64::new(r, 0.0), Complex64::new(r, 0.0)]; g.num_edges()];
    let z = g.num_cycles() as f64;
    let want = z * 2f64.powf(-(g.num_edges() as f64) / 2.0) / z.sqrt();
    assert!((product_state_overlap(&g, &phi).unwrap() - want).norm() < 1e-14);
}

#[test]
fn marginals_match_dense_partial_trace() {
    let mut rng = seeded(2);
    let g = grid(2, 3).unwrap();
    let n = g.num_edges();
    let psi = surface_code_state(&g).unwrap();
    for _ in 0..20 {
        let m: u64 = rng.random_range(0..1u64 << n);
        let phi: Vec<Qubit> = (0..n).map(|_| random_qubit(&mut rng)).collect();
        // Σ over complement strings e of |⟨Φ_M ⊗ e|ψ⟩|².
        let mut want = 0.0;
        let rest = !m & ((1u64 << n) - 1);
        let mut e = 0u64;
        loop {
            let mut amp = Complex64::new(0.0, 0.0);
            let mut xm = 0u64;
            loop {
                let x = xm | e;
                let bra: Complex64 = (0..n)
                    .filter(|j| m >> j & 1 == 1)
                    .map(|j| phi[j][(x >> j & 1) as usize].conj())
                    .product();
                amp += bra * psi[x as usize];
                xm = (xm.wrapping_sub(m)) & m;
                if xm == 0 {
                    break;
                }
            }
            want += amp.norm_sqr();
            e = (e.wrapping_sub(rest)) & rest;
            if e == 0 {
                break;
            }
        }
        let got = marginal_overlap(&g, m, &phi).unwrap();
        assert!((got - want).abs() < 1e-12, "M = {m:b}: {got} vs {want}");
    }
    let phi: Vec<Qubit> = (0..n).map(|_| random_qubit(&mut rng)).collect();
    let full = marginal_overlap(&g, (1 << n) - 1, &phi).unwrap();
    assert!((full - product_state_overlap(&g, &phi).unwrap().norm_sqr()).abs() < 1e-14);
    assert!((marginal_overlap(&g, 0, &phi).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn cycle_sums_match_subset_search() {
    let mut rng = seeded(3);
    let c = |rng: &mut ampsample::rng::SeededRng| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    };
    for gadget in [
        theta(ThetaWeights {
            a: c(&mut rng),
            b: c(&mut rng),
        }),
        gamma(GammaWeights {
            a: c(&mut rng),
            b: c(&mut rng),
            c: c(&mut rng),
            d: c(&mut rng),
        }),
    ] {
        let g = gadget.graph();
        let mut want = vec![Complex64::new(0.0, 0.0); 1 << gadget.dangling().len()];
        for x in cycles_by_subsets(g) {
            want[gadget.boundary(x) as usize] += g.weight_of(x);
        }
        let got = gadget.cycle_sums().unwrap();
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn gadget_identities() {
    let r = verify_gadgets().unwrap();
    for (name, ok) in r.checks() {
        assert!(ok, "{name}: {r:?}");
    }
    assert!(r.theta_000.norm() <= 1e-12);
    assert!((r.tau - 3.732).abs() <= 1e-3, "τ = {}", r.tau);
    let table: BTreeMap<&str, f64> = r
        .crossing_table
        .iter()
        .map(|(z, v)| (z.as_str(), *v))
        .collect();
    for z in ["0000", "1010", "0101", "1111"] {
        assert!((table[z] - 1.0).abs() < 1e-9);
    }
    for z in ["1100", "0011", "1001", "0110"] {
        assert!(table[z].abs() < 1e-9);
    }
    let g = gamma(GammaWeights::default());
    for (z, p) in GAMMA_REPRESENTATIVES
        .iter()
        .zip(gamma_polynomials(GammaWeights::default()))
    {
        assert!((weighted_cycle_sum(&g, z).unwrap() - p).norm() < 1e-12);
    }
}

#[test]
fn perturbed_weights_break_the_identities() {
    let mut tw = ThetaWeights::default();
    tw.a *= Complex64::from_polar(1.0, 0.01);
    let r = verify_gadgets_with(tw, GammaWeights::default()).unwrap();
    assert!(r.theta_000.norm() > 1e-3);
    assert!(!r.passes());
    let gw = GammaWeights {
        c: Complex64::new(-0.7, 0.0),
        ..GammaWeights::default()
    };
    assert!(!verify_gadgets_with(ThetaWeights::default(), gw)
        .unwrap()
        .passes());
}

#[test]
fn reduction_counts() {
    for (d, want) in [(k4(), 3), (k33_one_crossing(), 6), (triple_edge(), 3)] {
        let r = perfect_matchings_via_reduction(&d).unwrap();
        assert_eq!(r.count, want, "{r:?}");
        assert_eq!(r.brute_force, want);
        assert!((r.value - want as f64).abs() <= INTEGRALITY_TOL);
    }
}

#[test]
fn identity_schedule_samples_cycles() {
    let inst = SurfaceCodeInstance::identity(polygon(4)).unwrap();
    let mut rng = seeded(4);
    let runs = 100_000;
    let mut ones = 0;
    for _ in 0..runs {
        let x = mbqc_sample(&inst, &mut rng).unwrap();
        assert!(inst.graph().is_cycle(x.bits()));
        ones += (x.bits() == 0b1111) as usize;
    }
    assert!((ones as f64 / runs as f64 - 0.5).abs() <= 0.02);
}

#[test]
fn hadamard_schedule_matches_brute_force() {
    let g = polygon(4);
    let sched = Circuit::from_gates(4, (0..4).map(Gate::h)).unwrap();
    let inst = SurfaceCodeInstance::new(g, sched).unwrap();
    let reference = inst.reference_distribution().unwrap();
    let mut rng = seeded(5);
    let samples: Vec<BitString> = (0..100_000)
        .map(|_| mbqc_sample(&inst, &mut rng).unwrap())
        .collect();
    let empirical = Distribution::from_samples(4, &samples);
    assert!(tv_distance(&empirical, &reference).tv <= 0.02);
    let induced = inst.induced_distribution().unwrap();
    assert!(tv_distance(&induced, &reference).l1 <= 1e-8);
}

#[test]
fn induced_law_matches_reference() {
    let mut rng = seeded(6);
    let graphs = [polygon(3), polygon(5), grid(2, 3).unwrap()];
    for trial in 0..30 {
        let g = graphs[trial % graphs.len()].clone();
        let n = g.num_edges();
        let sched = random_schedule(n, trial % 2 == 1, &mut rng);
        let inst = SurfaceCodeInstance::new(g, sched).unwrap();
        let induced = inst.induced_distribution().unwrap();
        let reference = inst.reference_distribution().unwrap();
        let l1 = tv_distance(&induced, &reference).l1;
        assert!(l1 <= 1e-8, "trial {trial}: L1 = {l1}");
    }
}

#[test]
fn schedule_shape_is_checked() {
    let g = polygon(3);
    let wrong = Circuit::from_gates(3, [Gate::h(0), Gate::h(2), Gate::h(1)]).unwrap();
    assert!(SurfaceCodeInstance::new(g.clone(), wrong).is_err());
    let short = Circuit::from_gates(3, [Gate::h(0)]).unwrap();
    assert!(SurfaceCodeInstance::new(g, short).is_err());
}

#[test]
fn graph_text_round_trip() {
    let g = grid(2, 3).unwrap();
    let back = PlanarGraph::parse(&g.to_text()).unwrap();
    assert_eq!(back.edges(), g.edges());
    assert_eq!(back.faces(), g.faces());
    let text = "edges\n0 0 1\n1 1 -\nweights\n1 2,0\n";
    match PlanarGraph::parse(text) {
        Err(ampsample::Error::InvalidGraph(_)) => {}
        other => panic!("dangling weight accepted: {other:?}"),
    }
    let bad = "edges\n0 0 1\n0 1 2\n";
    assert!(matches!(
        PlanarGraph::parse(bad),
        Err(ampsample::Error::Parse { line: 3, .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_satisfy_parity(seed in any::<u64>(), vertices in 2usize..8, extra in 0usize..10) {
        let mut rng = seeded(seed);
        let mut edges: Vec<Edge> = (1..vertices).map(|v| Edge::new(rng.random_range(0..v), v)).collect();
        for _ in 0..extra {
            edges.push(Edge::new(rng.random_range(0..vertices), rng.random_range(0..vertices)));
        }
        let g = PlanarGraph::new(vertices, edges).unwrap();
        prop_assert_eq!(g.cycle_space_dim(), extra);
        for _ in 0..20 {
            prop_assert!(g.is_cycle(g.sample_cycle(&mut rng).bits()));
        }
    }
}
