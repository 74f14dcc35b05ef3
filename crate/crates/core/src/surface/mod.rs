//! Surface-code states on planar graphs: cycle sampling, product-state
//! amplitudes, adaptive single-qubit measurement simulation, gadgets and
//! the perfect-matching reduction.

mod gadgets;
mod graph;
mod mbqc;
mod overlap;
mod reduction;

pub use gadgets::{
    gamma, gamma_polynomials, pack, theta, verify_gadgets, verify_gadgets_with, weighted_cycle_sum,
    Gadget, GadgetReport, GammaWeights, ThetaWeights, GADGET_MAX_EDGES, GAMMA_REPRESENTATIVES,
    GAMMA_TOL, THETA_TOL,
};
pub use graph::{grid, polygon, Edge, PlanarGraph, MAX_EDGES};
pub use mbqc::{
    mbqc_sample, random_schedule, surface_code_state, SurfaceCodeInstance, MBQC_EXACT_MAX_EDGES,
};
pub use overlap::{
    basis_qubit, marginal_overlap, product_state_overlap, Qubit, MARGINAL_MAX_DIM, OVERLAP_MAX_DIM,
};
pub use reduction::{
    build_reduction, count_perfect_matchings, k33_one_crossing, k4,
    perfect_matchings_via_reduction, reduction_with, triple_edge, Drawing, ReductionInstance,
    ReductionReport, INTEGRALITY_TOL,
};
