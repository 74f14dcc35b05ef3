use num_complex::Complex64;

use super::Distribution;
use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::Result;
use crate::statevector::{apply_gate, guard, zero_state};

pub const REFERENCE_MAX_QUBITS: usize = 10;

/// Exact output law `|⟨x|U|0ⁿ⟩|²`.
///
/// Classically controlled gates are handled by explicit branching: the
/// control qubits are measured, and each outcome continues with its own
/// (unnormalized) branch state.
pub fn reference_distribution(c: &Circuit) -> Result<Distribution> {
    guard(c.num_qubits(), REFERENCE_MAX_QUBITS)?;
    reference_distribution_from(c, zero_state(c.num_qubits()))
}

/// Exact output law of `c` applied to `initial`, with the same branching.
pub fn reference_distribution_from(c: &Circuit, initial: Vec<Complex64>) -> Result<Distribution> {
    guard(c.num_qubits(), REFERENCE_MAX_QUBITS)?;
    if initial.len() != 1usize << c.num_qubits() {
        return Err(crate::error::Error::InvalidArgument(format!(
            "initial state has length {}, expected 2^{}",
            initial.len(),
            c.num_qubits()
        )));
    }
    let mut probs = vec![0.0; initial.len()];
    branch(c, 0, initial, &mut probs);
    Ok(Distribution::from_dense(c.num_qubits(), &probs))
}

fn branch(c: &Circuit, start: usize, mut state: Vec<Complex64>, out: &mut [f64]) {
    let n = c.num_qubits();
    for idx in start..c.len() {
        let Some(ct) = c.control(idx) else {
            apply_gate(&mut state, &c.gates()[idx]);
            continue;
        };
        let cmask = ct.controls_mask() as usize;
        for v in 0..1u64 << ct.controls.len() {
            let value = BitString::zeros(n)
                .with_restriction(&ct.controls, v)
                .index();
            let mut projected: Vec<Complex64> = state
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    if i & cmask == value {
                        a
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            if projected.iter().all(|a| a.norm_sqr() == 0.0) {
                continue;
            }
            let g = ct.table.get(&v).unwrap_or(&c.gates()[idx]);
            apply_gate(&mut projected, g);
            branch(c, idx + 1, projected, out);
        }
        return;
    }
    for (p, a) in out.iter_mut().zip(&state) {
        *p += a.norm_sqr();
    }
}
