//! Dense state-vector kernels. Index bit `i` holds qubit `i`.

use num_complex::Complex64;

use crate::bits::BitString;
use crate::circuit::{Circuit, Gate, GateClass};
use crate::error::{Error, Result};

pub type State = Vec<Complex64>;

/// Largest register simulated densely without `--force`.
pub const MAX_QUBITS: usize = 26;

/// `|0ⁿ⟩`.
pub fn zero_state(n: usize) -> State {
    let mut s = vec![Complex64::new(0.0, 0.0); 1usize << n];
    s[0] = Complex64::new(1.0, 0.0);
    s
}

fn offsets(g: &Gate) -> Vec<usize> {
    (0..g.dim())
        .map(|v| {
            g.support()
                .iter()
                .enumerate()
                .filter(|(k, _)| (v >> k) & 1 == 1)
                .fold(0usize, |acc, (_, &q)| acc | (1 << q))
        })
        .collect()
}

/// Applies `g` to the components whose bits on `filter_mask` equal
/// `filter_value`. `g` must not act on the filtered bits.
pub fn apply_gate_filtered(
    state: &mut [Complex64],
    g: &Gate,
    filter_mask: usize,
    filter_value: usize,
) {
    let mask = g.support_mask() as usize;
    debug_assert_eq!(mask & filter_mask, 0);
    let offs = offsets(g);
    let dim = g.dim();
    match g.class() {
        GateClass::Diagonal => {
            for (v, &off) in offs.iter().enumerate() {
                let d = g.entry(v, v);
                if d == Complex64::new(1.0, 0.0) {
                    continue;
                }
                for base in 0..state.len() {
                    if base & mask == 0 && base & filter_mask == filter_value {
                        state[base | off] *= d;
                    }
                }
            }
        }
        _ => {
            let mut buf = vec![Complex64::new(0.0, 0.0); dim];
            for base in 0..state.len() {
                if base & mask != 0 || base & filter_mask != filter_value {
                    continue;
                }
                for (b, &off) in buf.iter_mut().zip(&offs) {
                    *b = state[base | off];
                }
                for (r, &off) in offs.iter().enumerate() {
                    let row = &g.matrix()[r * dim..(r + 1) * dim];
                    state[base | off] = row.iter().zip(&buf).map(|(m, a)| m * a).sum();
                }
            }
        }
    }
}

pub fn apply_gate(state: &mut [Complex64], g: &Gate) {
    apply_gate_filtered(state, g, 0, 0);
}

/// Applies position `idx` of `c`, realizing classical control coherently:
/// each control-value sector receives its own gate.
pub fn apply_position(state: &mut [Complex64], c: &Circuit, idx: usize) {
    match c.control(idx) {
        None => apply_gate(state, &c.gates()[idx]),
        Some(ct) => {
            let cmask = ct.controls_mask() as usize;
            for v in 0..1u64 << ct.controls.len() {
                let value = BitString::zeros(c.num_qubits())
                    .with_restriction(&ct.controls, v)
                    .index();
                let g = ct.table.get(&v).unwrap_or(&c.gates()[idx]);
                apply_gate_filtered(state, g, cmask, value);
            }
        }
    }
}

/// `U_t ⋯ U_1 |0ⁿ⟩`.
pub fn simulate(c: &Circuit, t: usize) -> Result<State> {
    guard(c.num_qubits(), MAX_QUBITS)?;
    let mut s = zero_state(c.num_qubits());
    for idx in 0..t {
        apply_position(&mut s, c, idx);
    }
    Ok(s)
}

pub(crate) fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::Guard {
            what: "qubit count",
            value: n,
            limit,
        })
    } else {
        Ok(())
    }
}

pub fn norm_sqr(state: &[Complex64]) -> f64 {
    state.iter().map(Complex64::norm_sqr).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_state() {
        let c = parse_circuit("qubits 2\nh 0\ncx 0 1").unwrap();
        let s = simulate(&c, 2).unwrap();
        assert!((s[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(s[1].norm() < 1e-15 && s[2].norm() < 1e-15);
    }

    #[test]
    fn support_order_is_little_endian() {
        // matrix on (1, 0) mapping local |01⟩ (qubit 1 set) to local |10⟩ (qubit 0 set)
        let c = parse_circuit(
            "qubits 2\nx 1\nmatrix 2 1 0 1,0 0,0 0,0 0,0 0,0 0,0 1,0 0,0 0,0 1,0 0,0 0,0 0,0 0,0 0,0 1,0",
        )
        .unwrap();
        let s = simulate(&c, 2).unwrap();
        assert!((s[0b01].re - 1.0).abs() < 1e-15, "{s:?}");
    }
}
