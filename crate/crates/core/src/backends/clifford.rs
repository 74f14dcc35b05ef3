use num_complex::Complex64;

use crate::bits::BitString;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

/// `i^phase X^x Z^z` with the X factor to the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pauli {
    pub phase: u8,
    pub x: u64,
    pub z: u64,
}

impl Pauli {
    pub const IDENTITY: Pauli = Pauli {
        phase: 0,
        x: 0,
        z: 0,
    };

    /// Operator product `self · other`.
    #[inline]
    pub fn compose(self, other: Pauli) -> Pauli {
        let swap = (self.z & other.x).count_ones() as u8;
        Pauli {
            phase: (self.phase + other.phase + 2 * swap) & 3,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    #[inline]
    fn xb(&self, q: usize) -> u8 {
        ((self.x >> q) & 1) as u8
    }

    #[inline]
    fn zb(&self, q: usize) -> u8 {
        ((self.z >> q) & 1) as u8
    }

    fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    fn conj_h(&mut self, q: usize) {
        let (a, b) = (self.xb(q), self.zb(q));
        self.add_phase(2 * a * b);
        let bit = 1u64 << q;
        self.x = (self.x & !bit) | ((b as u64) << q);
        self.z = (self.z & !bit) | ((a as u64) << q);
    }

    fn conj_s(&mut self, q: usize, dagger: bool) {
        let a = self.xb(q);
        self.add_phase(if dagger { 3 * a } else { a });
        self.z ^= (a as u64) << q;
    }

    fn conj_cnot(&mut self, c: usize, t: usize) {
        self.x ^= (self.xb(c) as u64) << t;
        self.z ^= (self.zb(t) as u64) << c;
    }

    fn conj_cz(&mut self, a: usize, b: usize) {
        let (xa, xb) = (self.xb(a), self.xb(b));
        self.add_phase(2 * xa * xb);
        self.z ^= ((xb as u64) << a) | ((xa as u64) << b);
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Stabilizer state with exact global phase.
///
/// Stored as `n` commuting stabilizer generators plus one basis string `r`
/// in the support together with the amplitude `⟨r|ψ⟩`. Any amplitude
/// follows from `⟨x|ψ⟩ = ⟨x|g|ψ⟩` for the group element `g` whose X part is
/// `x ⊕ r`.
#[derive(Clone, Debug)]
pub struct CliffordState {
    n: usize,
    rows: Vec<Pauli>,
    reference: u64,
    alpha: Complex64,
    /// Row indices and pivot qubits of the reduced X-echelon, when current.
    pivots: Option<Vec<(usize, usize)>>,
}

impl CliffordState {
    /// `|0ⁿ⟩`.
    pub fn zero(n: usize) -> Self {
        assert!(n <= 64);
        CliffordState {
            n,
            rows: (0..n)
                .map(|q| Pauli {
                    phase: 0,
                    x: 0,
                    z: 1 << q,
                })
                .collect(),
            reference: 0,
            alpha: Complex64::new(1.0, 0.0),
            pivots: None,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Pauli] {
        &self.rows
    }

    fn reduce(&mut self) -> &[(usize, usize)] {
        if self.pivots.is_none() {
            let mut pivots = Vec::new();
            let mut rank = 0;
            for q in 0..self.n {
                let bit = 1u64 << q;
                let Some(p) = (rank..self.n).find(|&i| self.rows[i].x & bit != 0) else {
                    continue;
                };
                self.rows.swap(rank, p);
                let pivot_row = self.rows[rank];
                for i in 0..self.n {
                    if i != rank && self.rows[i].x & bit != 0 {
                        self.rows[i] = self.rows[i].compose(pivot_row);
                    }
                }
                pivots.push((rank, q));
                rank += 1;
            }
            self.pivots = Some(pivots);
        }
        self.pivots.as_deref().expect("just computed")
    }

    /// `⟨x|ψ⟩` including global phase.
    pub fn amplitude_bits(&mut self, x: u64) -> Complex64 {
        let r = self.reference;
        let target = x ^ r;
        let mut v = target;
        let mut acc = Pauli::IDENTITY;
        let pivots = self.reduce().to_vec();
        for (row, q) in pivots {
            if (v >> q) & 1 == 1 {
                let g = self.rows[row];
                acc = acc.compose(g);
                v ^= g.x;
            }
        }
        if v != 0 {
            return Complex64::new(0.0, 0.0);
        }
        debug_assert_eq!(acc.x, target);
        let sign = if (acc.z & r).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        i_pow(acc.phase) * self.alpha * sign
    }

    pub fn amplitude(&mut self, x: BitString) -> Complex64 {
        self.amplitude_bits(x.bits())
    }

    /// Applies a Clifford gate from {H, S, S†, X, Y, Z, CZ, CNOT}.
    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        let s = g.support();
        match g.kind() {
            GateKind::H => {
                let q = s[0];
                let bit = 1u64 << q;
                let r0 = self.reference & !bit;
                let r1 = self.reference | bit;
                let a0 = self.amplitude_bits(r0);
                let a1 = self.amplitude_bits(r1);
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let (b0, b1) = ((a0 + a1) * h, (a0 - a1) * h);
                if b0.norm_sqr() >= b1.norm_sqr() {
                    self.reference = r0;
                    self.alpha = b0;
                } else {
                    self.reference = r1;
                    self.alpha = b1;
                }
                self.rows.iter_mut().for_each(|p| p.conj_h(q));
            }
            GateKind::S | GateKind::Sdg => {
                let dagger = g.kind() == GateKind::Sdg;
                self.permute_reference(g)?;
                self.rows.iter_mut().for_each(|p| p.conj_s(s[0], dagger));
            }
            GateKind::X | GateKind::Y | GateKind::Z => {
                self.permute_reference(g)?;
                let k = match g.kind() {
                    GateKind::X => (0, 1),
                    GateKind::Z => (1, 0),
                    _ => (1, 1),
                };
                let q = s[0];
                for p in &mut self.rows {
                    let ph = 2 * (k.0 * p.xb(q) + k.1 * p.zb(q));
                    p.add_phase(ph);
                }
            }
            GateKind::CNOT => {
                self.permute_reference(g)?;
                self.rows.iter_mut().for_each(|p| p.conj_cnot(s[0], s[1]));
            }
            GateKind::CZ => {
                self.permute_reference(g)?;
                self.rows.iter_mut().for_each(|p| p.conj_cz(s[0], s[1]));
            }
            _ => return Err(Error::UnsupportedGate(g.label().to_string())),
        }
        self.pivots = None;
        Ok(())
    }

    fn permute_reference(&mut self, g: &Gate) -> Result<()> {
        let r = BitString::from_bits(self.reference, self.n);
        let (y, phase) = g.apply_permutation(r)?;
        self.reference = y.bits();
        self.alpha *= phase;
        Ok(())
    }

    /// Builds the state `C|0ⁿ⟩` for a non-adaptive Clifford circuit.
    pub fn from_circuit(c: &Circuit) -> Result<Self> {
        check_clifford(c)?;
        let mut s = CliffordState::zero(c.num_qubits());
        for g in c.gates() {
            s.apply(g)?;
        }
        Ok(s)
    }
}

fn check_clifford(c: &Circuit) -> Result<()> {
    if c.is_adaptive() {
        return Err(Error::UnsupportedGate("classically controlled gate".into()));
    }
    match c.gates().iter().find(|g| !g.kind().is_clifford()) {
        Some(g) => Err(Error::UnsupportedGate(format!(
            "{} is not in the Clifford set",
            g.label()
        ))),
        None => Ok(()),
    }
}

/// `⟨x|C|0ⁿ⟩` with exact global phase.
pub fn clifford_amplitude(c: &Circuit, x: BitString) -> Result<Complex64> {
    super::check_string(x, c.num_qubits())?;
    Ok(CliffordState::from_circuit(c)?.amplitude(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn amp(text: &str, x: &str) -> Complex64 {
        clifford_amplitude(&parse_circuit(text).unwrap(), x.parse().unwrap()).unwrap()
    }

    #[test]
    fn hadamard_amplitude_is_positive() {
        let a = amp("qubits 1\nh 0", "1");
        assert!((a - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn s_after_h() {
        let a = amp("qubits 1\nh 0\ns 0", "1");
        assert!((a - Complex64::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn hzh_is_x() {
        assert!((amp("qubits 1\nh 0\nz 0\nh 0", "1") - 1.0).norm() < 1e-15);
        assert!(amp("qubits 1\nh 0\nz 0\nh 0", "0").norm() < 1e-15);
    }

    #[test]
    fn y_phase() {
        assert!((amp("qubits 1\ny 0", "1") - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let a = amp("qubits 1\nh 0\ny 0", "0");
        assert!((a - Complex64::new(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn rejects_t() {
        let c = parse_circuit("qubits 1\nt 0").unwrap();
        assert!(matches!(
            clifford_amplitude(&c, BitString::zeros(1)),
            Err(Error::UnsupportedGate(_))
        ));
    }

    #[test]
    fn pauli_product_rule() {
        // X·Z = -iY, so (X)(Z) = i^0 X Z
        let x = Pauli {
            phase: 0,
            x: 1,
            z: 0,
        };
        let z = Pauli {
            phase: 0,
            x: 0,
            z: 1,
        };
        assert_eq!(
            x.compose(z),
            Pauli {
                phase: 0,
                x: 1,
                z: 1
            }
        );
        // Z·X = -X·Z
        assert_eq!(
            z.compose(x),
            Pauli {
                phase: 2,
                x: 1,
                z: 1
            }
        );
    }
}
