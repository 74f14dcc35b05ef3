//! Sampling measurement outcomes of n-qubit states from amplitude oracles.
//!
//! The crate is organised around a single primitive, the amplitude
//! `⟨x|U_t⋯U_1|0ⁿ⟩` of a circuit prefix, and the samplers that consume it:
//!
//! * [`circuit`]: circuit representation, parsing and gate classification.
//! * [`backends`]: statevector, path-sum and stabilizer-decomposition
//!   amplitude oracles, plus a perturbed oracle for robustness studies.
//! * [`samplers`]: gate-by-gate and qubit-by-qubit sampling, exact induced
//!   distributions and the error-budget allocator.
//! * [`ground`]: Metropolis–Hastings sampling of ground-state distributions
//!   with exact small-instance verification.
//! * [`surface`]: surface-code states on planar graphs, adaptive
//!   single-qubit measurement simulation and the matching-count reduction.
//! * [`verify`]: self-contained verification suites shared by the CLI and
//!   the acceptance tests.

pub mod backends;
pub mod bits;
pub mod circuit;
pub mod error;
pub mod ground;
pub mod rng;
pub mod samplers;
pub mod statevector;
pub mod surface;
pub mod verify;

pub use backends::{AmplitudeOracle, CallCounter};
pub use bits::BitString;
pub use circuit::{Circuit, Gate, GateClass, GateKind};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use samplers::Distribution;
