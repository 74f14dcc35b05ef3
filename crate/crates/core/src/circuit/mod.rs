//! Circuit representation shared by every backend and sampler.

mod gate;
pub(crate) mod parse;
pub mod random;

use std::collections::BTreeMap;

pub use gate::{
    apply_permutation_gate, classify_gate, Gate, GateClass, GateKind, CLASSIFY_TOL, MAX_ARITY,
    UNITARITY_TOL,
};
pub use parse::{parse_circuit, parse_circuit_file, parse_circuit_with, parse_gate_line};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Classical control for one gate: the gate applied is chosen by the
/// already-fixed bits on `controls`.
///
/// `table` is keyed by the packed restriction `x_controls`; values missing
/// from the table fall back to the circuit's default gate at that position.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlTable {
    pub controls: Vec<usize>,
    pub table: BTreeMap<u64, Gate>,
}

impl ControlTable {
    pub fn new(controls: Vec<usize>) -> Self {
        ControlTable {
            controls,
            table: BTreeMap::new(),
        }
    }

    pub fn with(mut self, value: u64, gate: Gate) -> Self {
        self.table.insert(value, gate);
        self
    }

    pub fn controls_mask(&self) -> u64 {
        self.controls.iter().fold(0, |m, &q| m | (1u64 << q))
    }
}

/// `U = U_m ⋯ U_1` on `n` qubits. Gate `t` (1-based in the sampler
/// vocabulary) is `gates[t - 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    controls: BTreeMap<usize, ControlTable>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        assert!(n <= crate::bits::MAX_BITS);
        Circuit {
            n,
            gates: Vec::new(),
            controls: BTreeMap::new(),
        }
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        self.check_support(&gate)?;
        let mask = gate.support_mask();
        for (idx, table) in &self.controls {
            if table.controls_mask() & mask != 0 {
                return Err(Error::InvalidCircuit(format!(
                    "gate {} acts on a control qubit of gate {}",
                    self.gates.len(),
                    idx
                )));
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    /// Makes the most recently pushed gate classically controlled.
    pub fn control_last(&mut self, table: ControlTable) -> Result<&mut Self> {
        let idx = self
            .gates
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidCircuit("no gate to control".into()))?;
        let cmask = table.controls_mask();
        for &q in &table.controls {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n: self.n,
                });
            }
        }
        if table.controls.len() > 16 {
            return Err(Error::Guard {
                what: "control qubits",
                value: table.controls.len(),
                limit: 16,
            });
        }
        let bad = self.gates[idx].support_mask() & cmask != 0
            || table.table.values().any(|g| g.support_mask() & cmask != 0);
        if bad {
            return Err(Error::InvalidCircuit(format!(
                "gate {idx} acts on one of its own control qubits"
            )));
        }
        for (&v, g) in &table.table {
            if v >> table.controls.len() != 0 {
                return Err(Error::InvalidCircuit(format!(
                    "control value {v} wider than {} control bits",
                    table.controls.len()
                )));
            }
            self.check_support(g)?;
        }
        self.controls.insert(idx, table);
        Ok(self)
    }

    fn check_support(&self, gate: &Gate) -> Result<()> {
        match gate.support().iter().find(|&&q| q >= self.n) {
            Some(&q) => Err(Error::QubitOutOfRange {
                index: q,
                n: self.n,
            }),
            None => Ok(()),
        }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// `m`, the number of gates.
    #[inline]
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn control(&self, idx: usize) -> Option<&ControlTable> {
        self.controls.get(&idx)
    }

    pub fn controls(&self) -> impl Iterator<Item = (usize, &ControlTable)> {
        self.controls.iter().map(|(&i, t)| (i, t))
    }

    pub fn is_adaptive(&self) -> bool {
        !self.controls.is_empty()
    }

    /// The gate applied at position `idx` given the record `x` (only the
    /// control bits of `x` are read).
    pub fn resolve(&self, idx: usize, x: BitString) -> &Gate {
        match self.controls.get(&idx) {
            None => &self.gates[idx],
            Some(ct) => ct
                .table
                .get(&x.restrict(&ct.controls))
                .unwrap_or(&self.gates[idx]),
        }
    }

    /// Every gate that can be applied at position `idx`.
    pub fn alternatives(&self, idx: usize) -> impl Iterator<Item = &Gate> {
        std::iter::once(&self.gates[idx]).chain(
            self.controls
                .get(&idx)
                .into_iter()
                .flat_map(|t| t.table.values()),
        )
    }

    fn all_gates(&self) -> impl Iterator<Item = &Gate> {
        (0..self.gates.len()).flat_map(move |i| self.alternatives(i))
    }

    /// Largest support size `k` over all gates and alternatives.
    pub fn max_arity(&self) -> usize {
        self.all_gates().map(Gate::arity).max().unwrap_or(0)
    }

    pub fn is_clifford(&self) -> bool {
        self.all_gates().all(|g| g.kind().is_clifford())
    }

    pub fn is_clifford_t(&self) -> bool {
        self.all_gates()
            .all(|g| g.kind().is_clifford() || g.kind().is_t())
    }

    /// Number of T/T† gates among the first `t` positions.
    pub fn t_count(&self, t: usize) -> usize {
        self.gates[..t].iter().filter(|g| g.kind().is_t()).count()
    }

    /// Qubits touched by gates `1..=t` (including alternatives).
    pub fn touched_mask(&self, t: usize) -> u64 {
        (0..t)
            .flat_map(|i| self.alternatives(i))
            .fold(0, |m, g| m | g.support_mask())
    }

    pub fn prefix(&self, t: usize) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates[..t].to_vec(),
            controls: self
                .controls
                .range(..t)
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        }
    }

    /// Serializes a non-adaptive circuit to the text format.
    pub fn to_text(&self) -> Result<String> {
        if self.is_adaptive() {
            return Err(Error::InvalidCircuit(
                "adaptive circuits need control-table files; use to_files".into(),
            ));
        }
        Ok(self.to_files("unused").0)
    }

    /// Serializes to a main text plus one control-table file per adaptive
    /// gate, named `{stem}.ctrl{idx}`.
    pub fn to_files(&self, stem: &str) -> (String, Vec<(String, String)>) {
        let mut main = format!("qubits {}\n", self.n);
        let mut tables = Vec::new();
        for (i, g) in self.gates.iter().enumerate() {
            main.push_str(&parse::gate_to_line(g));
            if let Some(ct) = self.controls.get(&i) {
                let name = format!("{stem}.ctrl{i}");
                main.push_str(&format!(" ctrl {name}"));
                tables.push((name, parse::table_to_text(ct)));
            }
            main.push('\n');
        }
        (main, tables)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn later_gate_on_control_is_rejected() {
        let mut c = Circuit::new(3);
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::h(1)).unwrap();
        c.control_last(ControlTable::new(vec![0]).with(1, Gate::x(1)))
            .unwrap();
        assert!(c.push(Gate::h(2)).is_ok());
        assert!(c.push(Gate::h(0)).is_err());
    }

    #[test]
    fn gate_cannot_control_on_itself() {
        let mut c = Circuit::new(2);
        c.push(Gate::h(0)).unwrap();
        assert!(c
            .control_last(ControlTable::new(vec![0]).with(1, Gate::x(0)))
            .is_err());
    }

    #[test]
    fn resolve_reads_control_bits() {
        let mut c = Circuit::new(2);
        c.push(Gate::h(1)).unwrap();
        c.control_last(ControlTable::new(vec![0]).with(1, Gate::x(1)))
            .unwrap();
        assert_eq!(c.resolve(0, "00".parse().unwrap()).kind(), GateKind::H);
        assert_eq!(c.resolve(0, "10".parse().unwrap()).kind(), GateKind::X);
        assert!(c.is_adaptive());
        assert!(c.to_text().is_err());
    }

    #[test]
    fn out_of_range_support() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(Gate::cnot(0, 5)),
            Err(Error::QubitOutOfRange { index: 5, n: 2 })
        ));
    }
}
