//! Gate-by-gate and qubit-by-qubit sampling, exact output laws and the
//! error-budget allocator.

mod budget;
mod distribution;
mod gate_by_gate;
mod gof;
mod qubit_by_qubit;
mod reference;

pub use budget::{allocate_error_budget, circuit_xi, gate_xi, xi_rz, ErrorBudget};
pub use distribution::{tv_distance, Distances, Distribution};
pub use gate_by_gate::{
    gate_by_gate_sample, induced_sampler_distribution, sample_shots, QueryMode, SampleTrace,
    SamplerOptions, StepAction, INDUCED_MAX_QUBITS, ZERO_MASS_TOL,
};
pub use gof::{chi_square_gof, GofResult};
pub use qubit_by_qubit::{qubit_by_qubit_distribution, qubit_by_qubit_sample};
pub use reference::{reference_distribution, reference_distribution_from, REFERENCE_MAX_QUBITS};
