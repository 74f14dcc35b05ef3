use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{check_prefix, check_string, AmplitudeOracle, CallCounter};
use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::Result;

pub const DEFAULT_MEMO_BYTES: usize = 256 << 20;
const ENTRY_BYTES: usize = 48;

/// Feynman sum over intermediate basis strings, with a memo table capped by
/// a byte budget.
#[derive(Clone)]
pub struct PathSumOracle {
    circuit: Arc<Circuit>,
    touched: Vec<u64>,
    memo: HashMap<(usize, u64), Complex64>,
    max_entries: usize,
    counter: CallCounter,
}

impl PathSumOracle {
    pub fn new(c: &Circuit) -> Self {
        Self::with_memo_budget(c, DEFAULT_MEMO_BYTES)
    }

    /// `bytes = 0` disables memoization entirely.
    pub fn with_memo_budget(c: &Circuit, bytes: usize) -> Self {
        let touched = (0..=c.len()).map(|t| c.touched_mask(t)).collect();
        PathSumOracle {
            circuit: Arc::new(c.clone()),
            touched,
            memo: HashMap::new(),
            max_entries: bytes / ENTRY_BYTES,
            counter: CallCounter::new(c.len()),
        }
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.len()
    }

    fn amp(&mut self, t: usize, x: u64) -> Complex64 {
        if t == 0 {
            return if x == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        if x & !self.touched[t] != 0 {
            return Complex64::new(0.0, 0.0);
        }
        if let Some(&a) = self.memo.get(&(t, x)) {
            return a;
        }
        let n = self.circuit.num_qubits();
        let xs = BitString::from_bits(x, n);
        let circuit = Arc::clone(&self.circuit);
        let g = circuit.resolve(t - 1, xs);
        let row = xs.restrict(g.support()) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..g.dim() {
            let m = g.entry(row, col);
            if m.norm_sqr() == 0.0 {
                continue;
            }
            let z = xs.with_restriction(g.support(), col as u64).bits();
            acc += m * self.amp(t - 1, z);
        }
        if self.memo.len() < self.max_entries {
            self.memo.insert((t, x), acc);
        }
        acc
    }
}

impl AmplitudeOracle for PathSumOracle {
    fn backend(&self) -> &'static str {
        "pathsum"
    }

    fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    fn num_gates(&self) -> usize {
        self.circuit.len()
    }

    fn amplitude(&mut self, t: usize, x: BitString) -> Result<Complex64> {
        check_prefix(t, self.circuit.len())?;
        check_string(x, self.num_qubits())?;
        self.counter.record(t);
        Ok(self.amp(t, x.bits()))
    }

    fn calls(&self) -> &CallCounter {
        &self.counter
    }

    fn reset_calls(&mut self) {
        self.counter.reset();
    }

    fn clone_box(&self) -> Box<dyn AmplitudeOracle> {
        Box::new(self.clone())
    }
}
