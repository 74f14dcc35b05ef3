use std::hint::black_box;

use ampsample::backends::{Backend, PathSumOracle, StatevectorOracle};
use ampsample::rng::seeded;
use ampsample::samplers::{
    gate_by_gate_sample, induced_sampler_distribution, qubit_by_qubit_sample, SamplerOptions,
};
use ampsample_bench::{clifford_t_circuit, generic_circuit};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn gate_by_gate(c: &mut Criterion) {
    let mut group = c.benchmark_group("gate_by_gate");
    for n in [6, 10, 14] {
        let circ = generic_circuit(n, 40);
        let mut o = StatevectorOracle::new(&circ).unwrap();
        let mut rng = seeded(1);
        group.bench_with_input(BenchmarkId::new("statevector", n), &n, |b, _| {
            b.iter(|| {
                gate_by_gate_sample(&circ, &mut o, &SamplerOptions::default(), &mut rng).unwrap()
            })
        });
    }
    for n in [4, 6] {
        let circ = generic_circuit(n, 16);
        let mut rng = seeded(2);
        group.bench_with_input(BenchmarkId::new("pathsum", n), &n, |b, _| {
            b.iter_batched(
                || PathSumOracle::new(&circ),
                |mut o| {
                    gate_by_gate_sample(&circ, &mut o, &SamplerOptions::default(), &mut rng)
                        .unwrap()
                },
                criterion::BatchSize::SmallInput,
            )
        });
    }
    for t in [2, 4, 6] {
        let circ = clifford_t_circuit(8, 40, t);
        let mut o = Backend::StabDecomp.build(&circ).unwrap();
        let mut rng = seeded(3);
        group.bench_with_input(BenchmarkId::new("stabdecomp_t", t), &t, |b, _| {
            b.iter(|| {
                gate_by_gate_sample(&circ, o.as_mut(), &SamplerOptions::default(), &mut rng)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn qubit_by_qubit(c: &mut Criterion) {
    let circ = generic_circuit(10, 40);
    let mut o = StatevectorOracle::new(&circ).unwrap();
    let mut rng = seeded(4);
    c.bench_function("qubit_by_qubit/statevector/10", |b| {
        b.iter(|| qubit_by_qubit_sample(&circ, &mut o, &mut rng).unwrap())
    });
}

fn induced(c: &mut Criterion) {
    let circ = generic_circuit(6, 20);
    let mut o = StatevectorOracle::new(&circ).unwrap();
    c.bench_function("induced_distribution/6x20", |b| {
        b.iter(|| {
            black_box(
                induced_sampler_distribution(&circ, &mut o, &SamplerOptions::plain()).unwrap(),
            )
        })
    });
}

criterion_group!(benches, gate_by_gate, qubit_by_qubit, induced);
criterion_main!(benches);
