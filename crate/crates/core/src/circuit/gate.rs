use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Maximum gate arity accepted anywhere in the crate.
pub const MAX_ARITY: usize = 12;
/// Max-norm tolerance for `M†M = I`.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Default tolerance of [`classify_gate`].
pub const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateClass {
    Diagonal,
    BasisPermutation,
    General,
}

/// Which named family a gate came from. `Matrix` covers explicit matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    S,
    Sdg,
    T,
    Tdg,
    X,
    Y,
    Z,
    CZ,
    CNOT,
    Rz(f64),
    Matrix,
}

impl GateKind {
    pub fn is_clifford(self) -> bool {
        use GateKind::*;
        matches!(self, H | S | Sdg | X | Y | Z | CZ | CNOT)
    }

    pub fn is_t(self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }

    pub fn name(self) -> &'static str {
        use GateKind::*;
        match self {
            H => "h",
            S => "s",
            Sdg => "sdg",
            T => "t",
            Tdg => "tdg",
            X => "x",
            Y => "y",
            Z => "z",
            CZ => "cz",
            CNOT => "cx",
            Rz(_) => "rz",
            Matrix => "matrix",
        }
    }
}

/// A unitary on an ordered list of qubits.
///
/// Local basis index `v` of the `2^w × 2^w` row-major matrix encodes qubit
/// `support[k]` in bit `k` (first listed qubit least significant).
#[derive(Clone)]
pub struct Gate {
    matrix: Vec<Complex64>,
    support: Vec<usize>,
    label: String,
    kind: GateKind,
    class: GateClass,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Gate {
    /// Builds an explicit-matrix gate after checking shape, support and
    /// unitarity.
    pub fn from_matrix(
        matrix: Vec<Complex64>,
        support: Vec<usize>,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::build(matrix, support, label.into(), GateKind::Matrix)
    }

    fn build(
        matrix: Vec<Complex64>,
        support: Vec<usize>,
        label: String,
        kind: GateKind,
    ) -> Result<Self> {
        let w = support.len();
        if w == 0 {
            return Err(Error::InvalidGate("empty support".into()));
        }
        if w > MAX_ARITY {
            return Err(Error::Guard {
                what: "gate arity",
                value: w,
                limit: MAX_ARITY,
            });
        }
        for (i, q) in support.iter().enumerate() {
            if support[..i].contains(q) {
                return Err(Error::InvalidGate(format!("repeated qubit {q} in support")));
            }
        }
        let dim = 1usize << w;
        if matrix.len() != dim * dim {
            return Err(Error::InvalidGate(format!(
                "expected {} matrix entries for {w} qubits, got {}",
                dim * dim,
                matrix.len()
            )));
        }
        let deviation = unitarity_deviation(&matrix, dim);
        if deviation > UNITARITY_TOL || !deviation.is_finite() {
            return Err(Error::NotUnitary { deviation });
        }
        let mut gate = Gate {
            matrix,
            support,
            label,
            kind,
            class: GateClass::General,
        };
        gate.class = classify_gate(&gate, CLASSIFY_TOL);
        Ok(gate)
    }

    fn named(kind: GateKind, matrix: Vec<Complex64>, support: Vec<usize>) -> Self {
        Self::build(matrix, support, kind.name().to_string(), kind)
            .expect("named gate matrices are unitary")
    }

    pub fn h(q: usize) -> Self {
        let s = FRAC_1_SQRT_2;
        Self::named(
            GateKind::H,
            vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)],
            vec![q],
        )
    }

    pub fn s(q: usize) -> Self {
        Self::diag1(GateKind::S, q, c(0.0, 1.0))
    }

    pub fn sdg(q: usize) -> Self {
        Self::diag1(GateKind::Sdg, q, c(0.0, -1.0))
    }

    pub fn t(q: usize) -> Self {
        Self::diag1(GateKind::T, q, Complex64::from_polar(1.0, FRAC_PI_4))
    }

    pub fn tdg(q: usize) -> Self {
        Self::diag1(GateKind::Tdg, q, Complex64::from_polar(1.0, -FRAC_PI_4))
    }

    pub fn z(q: usize) -> Self {
        Self::diag1(GateKind::Z, q, c(-1.0, 0.0))
    }

    pub fn x(q: usize) -> Self {
        let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
        Self::named(GateKind::X, vec![o, l, l, o], vec![q])
    }

    pub fn y(q: usize) -> Self {
        let o = c(0.0, 0.0);
        Self::named(GateKind::Y, vec![o, c(0.0, -1.0), c(0.0, 1.0), o], vec![q])
    }

    /// `e^{-iθZ/2} = diag(e^{-iθ/2}, e^{iθ/2})`.
    pub fn rz(q: usize, theta: f64) -> Self {
        let o = c(0.0, 0.0);
        Self::named(
            GateKind::Rz(theta),
            vec![
                Complex64::from_polar(1.0, -theta / 2.0),
                o,
                o,
                Complex64::from_polar(1.0, theta / 2.0),
            ],
            vec![q],
        )
    }

    pub fn cz(a: usize, b: usize) -> Self {
        let mut m = vec![c(0.0, 0.0); 16];
        for v in 0..4 {
            m[v * 4 + v] = if v == 3 { c(-1.0, 0.0) } else { c(1.0, 0.0) };
        }
        Self::named(GateKind::CZ, m, vec![a, b])
    }

    /// CNOT with control `ctrl` (local bit 0) and target `tgt` (local bit 1).
    pub fn cnot(ctrl: usize, tgt: usize) -> Self {
        let mut m = vec![c(0.0, 0.0); 16];
        for v in 0..4usize {
            let out = if v & 1 == 1 { v ^ 2 } else { v };
            m[out * 4 + v] = c(1.0, 0.0);
        }
        Self::named(GateKind::CNOT, m, vec![ctrl, tgt])
    }

    fn diag1(kind: GateKind, q: usize, phase: Complex64) -> Self {
        let o = c(0.0, 0.0);
        Self::named(kind, vec![c(1.0, 0.0), o, o, phase], vec![q])
    }

    /// The same operation moved onto a different support (same arity).
    pub fn relabeled(&self, support: Vec<usize>) -> Result<Self> {
        if support.len() != self.support.len() {
            return Err(Error::InvalidGate("support size mismatch".into()));
        }
        let mut g = Self::build(self.matrix.clone(), support, self.label.clone(), self.kind)?;
        g.class = self.class;
        Ok(g)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let dim = self.dim();
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for col in 0..dim {
                m[col * dim + r] = self.matrix[r * dim + col].conj();
            }
        }
        let kind = match self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::Matrix => GateKind::Matrix,
            k => k,
        };
        let label = if kind == GateKind::Matrix {
            format!("{}^dg", self.label)
        } else {
            kind.name().to_string()
        };
        Self::build(m, self.support.clone(), label, kind).expect("adjoint of a unitary")
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.support.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.support.len()
    }

    #[inline]
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    #[inline]
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    /// Matrix element `⟨row|G|col⟩` in local indices.
    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim() + col]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn class(&self) -> GateClass {
        self.class
    }

    pub fn support_mask(&self) -> u64 {
        self.support.iter().fold(0, |m, &q| m | (1u64 << q))
    }

    /// `G|x⟩ = φ|y⟩` for basis-permutation gates.
    pub fn apply_permutation(&self, x: BitString) -> Result<(BitString, Complex64)> {
        apply_permutation_gate(self, x)
    }
}

/// Gates compare by operation and support; labels are descriptive only.
impl PartialEq for Gate {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.support == other.support && self.matrix == other.matrix
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.label, self.support)
    }
}

fn unitarity_deviation(m: &[Complex64], dim: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += m[k * dim + i].conj() * m[k * dim + j];
            }
            if i == j {
                acc -= 1.0;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

/// Classifies `g` as diagonal, basis permutation (monomial) or general.
///
/// Both tests compare moduli only, so the result is unchanged by a global
/// phase.
pub fn classify_gate(g: &Gate, tol: f64) -> GateClass {
    let dim = g.dim();
    let m = g.matrix();
    let diagonal = (0..dim).all(|r| (0..dim).all(|col| r == col || m[r * dim + col].norm() <= tol));
    if diagonal {
        return GateClass::Diagonal;
    }
    let permutation = (0..dim).all(|col| {
        let mut unit = 0;
        for r in 0..dim {
            let a = m[r * dim + col].norm();
            if (a - 1.0).abs() <= tol {
                unit += 1;
            } else if a > tol {
                return false;
            }
        }
        unit == 1
    });
    if permutation {
        GateClass::BasisPermutation
    } else {
        GateClass::General
    }
}

/// Returns `(y, φ)` with `g|x⟩ = φ|y⟩`.
pub fn apply_permutation_gate(g: &Gate, x: BitString) -> Result<(BitString, Complex64)> {
    if g.class() == GateClass::General {
        return Err(Error::NotPermutation(g.label().to_string()));
    }
    let col = x.restrict(g.support()) as usize;
    let dim = g.dim();
    let (row, phase) = (0..dim)
        .map(|r| (r, g.entry(r, col)))
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty column");
    Ok((x.with_restriction(g.support(), row as u64), phase))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn named_gate_classes() {
        assert_eq!(Gate::cz(0, 1).class(), GateClass::Diagonal);
        assert_eq!(Gate::cnot(0, 1).class(), GateClass::BasisPermutation);
        assert_eq!(Gate::h(0).class(), GateClass::General);
        assert_eq!(Gate::t(0).class(), GateClass::Diagonal);
        assert_eq!(Gate::y(0).class(), GateClass::BasisPermutation);
    }

    #[test]
    fn permutation_action() {
        let (y, ph) = Gate::cnot(0, 1).apply_permutation(bs("10")).unwrap();
        assert_eq!(y, bs("11"));
        assert_eq!(ph, c(1.0, 0.0));
        let (y, ph) = Gate::x(0).apply_permutation(bs("0")).unwrap();
        assert_eq!((y, ph), (bs("1"), c(1.0, 0.0)));
        let (y, ph) = Gate::z(0).apply_permutation(bs("1")).unwrap();
        assert_eq!((y, ph), (bs("1"), c(-1.0, 0.0)));
        assert!(Gate::h(0).apply_permutation(bs("0")).is_err());
    }

    #[test]
    fn cnot_is_little_endian_in_support() {
        let g = Gate::cnot(1, 0);
        let (y, _) = g.apply_permutation(bs("01")).unwrap();
        assert_eq!(y, bs("11"));
        let (y, _) = g.apply_permutation(bs("10")).unwrap();
        assert_eq!(y, bs("10"));
    }

    #[test]
    fn rejects_non_unitary_and_repeated_support() {
        let m = vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(
            Gate::from_matrix(m, vec![0], "bad"),
            Err(Error::NotUnitary { .. })
        ));
        let m = Gate::cz(0, 1).matrix().to_vec();
        assert!(Gate::from_matrix(m, vec![1, 1], "cz").is_err());
    }

    #[test]
    fn classification_ignores_global_phase() {
        let phase = Complex64::from_polar(1.0, 0.731);
        for g in [Gate::h(0), Gate::cnot(0, 1), Gate::cz(0, 1), Gate::y(0)] {
            let m = g.matrix().iter().map(|&z| z * phase).collect();
            let h = Gate::from_matrix(m, g.support().to_vec(), "phased").unwrap();
            assert_eq!(h.class(), g.class());
        }
    }

    #[test]
    fn adjoint_of_t_is_tdg() {
        let a = Gate::t(2).adjoint();
        assert_eq!(a.kind(), GateKind::Tdg);
        let b = Gate::tdg(2);
        for (x, y) in a.matrix().iter().zip(b.matrix()) {
            assert!((x - y).norm() < 1e-15);
        }
    }
}
