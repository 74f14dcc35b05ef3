//! Seeded random circuit families used by tests, benches and `verify`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Circuit, ControlTable, Gate};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random `dim × dim` unitary, row-major.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let z = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let d = r[(col, col)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..dim {
            out[row * dim + col] = q[(row, col)] * phase;
        }
    }
    out
}

fn distinct<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    sample(rng, n, k).into_vec()
}

pub fn haar_gate<R: Rng + ?Sized>(support: Vec<usize>, rng: &mut R) -> Gate {
    let m = haar_unitary(1 << support.len(), rng);
    Gate::from_matrix(m, support, "haar").expect("QR factor is unitary")
}

/// A random named or Haar gate on `arity` of the given qubits.
pub fn random_gate_on<R: Rng + ?Sized>(qubits: &[usize], max_arity: usize, rng: &mut R) -> Gate {
    let arity = rng.random_range(1..=max_arity.min(qubits.len()).max(1));
    let support: Vec<usize> = distinct(qubits.len(), arity, rng)
        .into_iter()
        .map(|i| qubits[i])
        .collect();
    if rng.random_bool(0.4) {
        return haar_gate(support, rng);
    }
    let q = support[0];
    if arity == 1 {
        match rng.random_range(0..8) {
            0 => Gate::h(q),
            1 => Gate::s(q),
            2 => Gate::t(q),
            3 => Gate::x(q),
            4 => Gate::y(q),
            5 => Gate::z(q),
            6 => Gate::tdg(q),
            _ => Gate::rz(q, rng.random_range(0.0..std::f64::consts::TAU)),
        }
    } else if arity == 2 {
        if rng.random_bool(0.5) {
            Gate::cnot(support[0], support[1])
        } else {
            Gate::cz(support[0], support[1])
        }
    } else {
        haar_gate(support, rng)
    }
}

/// Mixed circuit of Haar and named gates with supports up to `max_arity`.
pub fn random_circuit<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    max_arity: usize,
    rng: &mut R,
) -> Circuit {
    let all: Vec<usize> = (0..n).collect();
    let gates = (0..m).map(|_| random_gate_on(&all, max_arity, rng));
    Circuit::from_gates(n, gates).expect("supports within range")
}

pub fn random_clifford_gate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Gate {
    let q = rng.random_range(0..n);
    let two = n >= 2 && rng.random_bool(0.3);
    if two {
        let s = distinct(n, 2, rng);
        return if rng.random_bool(0.5) {
            Gate::cnot(s[0], s[1])
        } else {
            Gate::cz(s[0], s[1])
        };
    }
    match rng.random_range(0..6) {
        0 | 1 => Gate::h(q),
        2 => Gate::s(q),
        3 => Gate::sdg(q),
        4 => Gate::x(q),
        _ => match rng.random_range(0..2) {
            0 => Gate::y(q),
            _ => Gate::z(q),
        },
    }
}

pub fn random_clifford_circuit<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Circuit {
    let gates = (0..m).map(|_| random_clifford_gate(n, rng));
    Circuit::from_gates(n, gates).expect("supports within range")
}

/// Clifford circuit with exactly `t_count` T or T† gates at random positions.
pub fn random_clifford_t_circuit<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    t_count: usize,
    rng: &mut R,
) -> Circuit {
    let t_count = t_count.min(m);
    let positions = sample(rng, m, t_count).into_vec();
    let gates = (0..m).map(|i| {
        if positions.contains(&i) {
            let q = rng.random_range(0..n);
            if rng.random_bool(0.75) {
                Gate::t(q)
            } else {
                Gate::tdg(q)
            }
        } else {
            random_clifford_gate(n, rng)
        }
    });
    Circuit::from_gates(n, gates).expect("supports within range")
}

/// CNOTs interleaved with Haar single-qubit gates.
pub fn random_cnot_su2_circuit<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Circuit {
    let gates = (0..m).map(|_| {
        if n >= 2 && rng.random_bool(0.4) {
            let s = distinct(n, 2, rng);
            Gate::cnot(s[0], s[1])
        } else {
            haar_gate(vec![rng.random_range(0..n)], rng)
        }
    });
    Circuit::from_gates(n, gates).expect("supports within range")
}

/// Circuits built only from monomial gates (X, Y, Z, S, T, CNOT, CZ).
pub fn random_permutation_circuit<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Circuit {
    let gates = (0..m).map(|_| {
        let q = rng.random_range(0..n);
        if n >= 2 && rng.random_bool(0.4) {
            let s = distinct(n, 2, rng);
            if rng.random_bool(0.5) {
                Gate::cnot(s[0], s[1])
            } else {
                Gate::cz(s[0], s[1])
            }
        } else {
            match rng.random_range(0..5) {
                0 => Gate::x(q),
                1 => Gate::y(q),
                2 => Gate::z(q),
                3 => Gate::s(q),
                _ => Gate::t(q),
            }
        }
    });
    Circuit::from_gates(n, gates).expect("supports within range")
}

/// Adaptive circuit: qubits are retired over time and later gates may be
/// classically controlled by retired qubits.
pub fn random_adaptive_circuit<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    max_arity: usize,
    rng: &mut R,
) -> Circuit {
    assert!(n >= 2, "adaptive circuits need at least two qubits");
    let mut c = Circuit::new(n);
    let mut active: Vec<usize> = (0..n).collect();
    let mut retired: Vec<usize> = Vec::new();
    for i in 0..m {
        let can_retire = active.len() > max_arity.max(1) && i >= m / 4;
        if can_retire && rng.random_bool((n as f64 / m.max(1) as f64).min(0.5)) {
            let k = rng.random_range(0..active.len());
            retired.push(active.remove(k));
        }
        let gate = random_gate_on(&active, max_arity, rng);
        let arity = gate.arity();
        c.push(gate).expect("active qubits are never controls");
        if !retired.is_empty() && rng.random_bool(0.6) {
            let nc = rng.random_range(1..=retired.len().min(2));
            let controls: Vec<usize> = distinct(retired.len(), nc, rng)
                .into_iter()
                .map(|j| retired[j])
                .collect();
            let mut table = ControlTable::new(controls);
            for v in 0..1u64 << nc {
                if rng.random_bool(0.75) {
                    let alt_arity = rng.random_range(1..=arity.max(1));
                    let support: Vec<usize> = distinct(active.len(), alt_arity, rng)
                        .into_iter()
                        .map(|j| active[j])
                        .collect();
                    let g = if rng.random_bool(0.5) {
                        haar_gate(support, rng)
                    } else {
                        random_gate_on(&support, alt_arity, rng)
                    };
                    table.table.insert(v, g);
                }
            }
            c.control_last(table).expect("controls are retired qubits");
        }
    }
    c
}
