//! Metropolis–Hastings sampling of ground-state measurement laws and the
//! exact small-instance checks around it.

mod analysis;
mod chain;
mod eigen;
mod hamiltonian;
mod magic;
pub mod random;

pub use analysis::{
    gap_bound_check, mixing_time, sensitivity, stoquastic_check_and_bound, GapReport,
    StoquasticReport, GAP_CHECK_MAX_QUBITS, SENSITIVITY_AMPLITUDE_TOL, STOQUASTIC_TOL,
};
pub use chain::{
    binomial, binomial_sum, chain_matrix, metropolis_step, propose, run_chain, run_chain_with,
    run_chains, tv_decay, ChainConfig, ChainMatrix, ChainStats, ExactOracle, GroundStateOracle,
    StepOutcome, TvDecay, CHAIN_MATRIX_MAX_STATES, SUPPORT_TOL,
};
pub use eigen::{exact_ground_state, lowest_two, GroundState, DEGENERACY_TOL};
pub use hamiltonian::{
    parse_entries, PauliTerm, SparseHamiltonian, HAMILTONIAN_MAX_QUBITS, HERMITIAN_TOL,
};
pub use magic::{
    magic_ratio, verify_magic_ratio_structure, MagicRatioHamiltonian, MagicRatioOracle,
    MagicReport, SparseState, MAGIC_NORM_TOL, MAGIC_VERIFY_MAX_QUBITS,
};
