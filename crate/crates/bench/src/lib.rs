//! Seeded fixtures shared by the benchmarks.

use ampsample::circuit::random::{random_circuit, random_clifford_t_circuit};
use ampsample::ground::random::tfim;
use ampsample::ground::{exact_ground_state, ExactOracle};
use ampsample::rng::seeded;
use ampsample::Circuit;

pub fn generic_circuit(n: usize, m: usize) -> Circuit {
    random_circuit(n, m, 2, &mut seeded(n as u64 * 1000 + m as u64))
}

pub fn clifford_t_circuit(n: usize, m: usize, t: usize) -> Circuit {
    random_clifford_t_circuit(n, m, t, &mut seeded(7 + t as u64))
}

/// Exact ground-state oracle of the `n`-qubit transverse-field Ising chain.
pub fn tfim_oracle(n: usize, g: f64) -> ExactOracle {
    let h = tfim(n, g).expect("valid chain");
    let psi = exact_ground_state(&h).expect("gapped chain").psi;
    ExactOracle::from_state(n, &psi)
}
