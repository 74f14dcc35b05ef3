use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::PlanarGraph;
use crate::error::{Error, Result};

pub const OVERLAP_MAX_DIM: usize = 22;
pub const MARGINAL_MAX_DIM: usize = 16;
/// Cycle spaces below this dimension are enumerated on one thread.
const PARALLEL_MIN_DIM: usize = 12;
const CHUNK_BITS: usize = 10;

/// Single-qubit state `φ[0]|0⟩ + φ[1]|1⟩`.
pub type Qubit = [Complex64; 2];

pub fn basis_qubit(bit: bool) -> Qubit {
    let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    if bit {
        [zero, one]
    } else {
        [one, zero]
    }
}

fn check_states(g: &PlanarGraph, phi: &[Qubit]) -> Result<()> {
    if phi.len() != g.num_edges() {
        return Err(Error::InvalidArgument(format!(
            "{} single-qubit states for {} edges",
            phi.len(),
            g.num_edges()
        )));
    }
    Ok(())
}

/// `Π_j ⟨φ_j|x_j⟩` over the edges in `mask`.
fn bra_product(conj: &[Qubit], x: u64, mask: u64) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    let mut rest = mask;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        p *= conj[j][(x >> j & 1) as usize];
        rest &= rest - 1;
    }
    p
}

fn conjugated(phi: &[Qubit]) -> Vec<Qubit> {
    phi.iter().map(|q| [q[0].conj(), q[1].conj()]).collect()
}

/// Cycles `span(basis[..low]) ⊕ offset` for every `offset` in the span of
/// the remaining vectors, visited chunk by chunk in parallel.
fn sum_over_cycles<T, F, G>(
    g: &PlanarGraph,
    limit: usize,
    init: impl Fn() -> T + Sync + Send,
    visit: F,
    merge: G,
) -> Result<T>
where
    T: Send,
    F: Fn(&mut T, u64) + Sync,
    G: Fn(T, T) -> T + Sync + Send,
{
    let basis = g.cycle_space_basis();
    let dim = basis.len();
    if dim > limit {
        return Err(Error::Guard {
            what: "cycle space dimension",
            value: dim,
            limit,
        });
    }
    let low = if dim < PARALLEL_MIN_DIM {
        dim
    } else {
        CHUNK_BITS.min(dim)
    };
    let chunk = |hi: u64| {
        let mut offset = 0u64;
        for (k, b) in basis[low..].iter().enumerate() {
            if hi >> k & 1 == 1 {
                offset ^= b;
            }
        }
        let mut acc = init();
        let mut x = offset;
        visit(&mut acc, x);
        for i in 1u64..1 << low {
            x ^= basis[i.trailing_zeros() as usize];
            visit(&mut acc, x);
        }
        acc
    };
    let highs = 1u64 << (dim - low);
    if highs == 1 {
        return Ok(chunk(0));
    }
    Ok((0..highs).into_par_iter().map(chunk).reduce(&init, &merge))
}

/// `⟨Φ|ψ_G⟩ = |𝒵|^{-1/2} Σ_{x∈𝒵} Π_j ⟨φ_j|x_j⟩`.
pub fn product_state_overlap(g: &PlanarGraph, phi: &[Qubit]) -> Result<Complex64> {
    check_states(g, phi)?;
    let conj = conjugated(phi);
    let all = crate::bits::low_mask(g.num_edges());
    let sum = sum_over_cycles(
        g,
        OVERLAP_MAX_DIM,
        || Complex64::new(0.0, 0.0),
        |acc, x| *acc += bra_product(&conj, x, all),
        |a, b| a + b,
    )?;
    Ok(sum / (g.num_cycles() as f64).sqrt())
}

/// `μ = ⟨Φ|ρ_M|Φ⟩` with `ρ_M` the reduced state of `ψ_G` on the edges in
/// `m`. Only `phi[j]` for `j ∈ m` is read. Cycles are grouped by their
/// restriction to the complement of `m`.
pub fn marginal_overlap(g: &PlanarGraph, m: u64, phi: &[Qubit]) -> Result<f64> {
    check_states(g, phi)?;
    let all = crate::bits::low_mask(g.num_edges());
    if m & !all != 0 {
        return Err(Error::InvalidArgument(
            "marginal set names unknown edges".into(),
        ));
    }
    let conj = conjugated(phi);
    let rest = all & !m;
    let buckets = sum_over_cycles(
        g,
        MARGINAL_MAX_DIM,
        HashMap::<u64, Complex64>::new,
        |acc, x| *acc.entry(x & rest).or_default() += bra_product(&conj, x, m),
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    )?;
    let total: f64 = buckets.values().map(Complex64::norm_sqr).sum();
    Ok(total / g.num_cycles() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Edge;

    fn square() -> PlanarGraph {
        PlanarGraph::new(4, (0..4).map(|i| Edge::new(i, (i + 1) % 4)).collect()).unwrap()
    }

    #[test]
    fn square_examples() {
        let g = square();
        let zeros = vec![basis_qubit(false); 4];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((product_state_overlap(&g, &zeros).unwrap() - r).norm() < 1e-15);
        let mut one = zeros.clone();
        one[0] = basis_qubit(true);
        assert!(product_state_overlap(&g, &one).unwrap().norm() < 1e-15);
        assert!((marginal_overlap(&g, 1, &zeros).unwrap() - 0.5).abs() < 1e-15);
        assert!((marginal_overlap(&g, 0, &zeros).unwrap() - 1.0).abs() < 1e-15);
        let full = marginal_overlap(&g, 0b1111, &zeros).unwrap();
        assert!((full - 0.5).abs() < 1e-15);
    }
}
