use std::sync::Arc;

use num_complex::Complex64;

use super::{check_prefix, check_string, AmplitudeOracle, CallCounter};
use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::statevector::{apply_position, guard, zero_state, State};

pub const STATEVECTOR_MAX_QUBITS: usize = 26;

/// Exact oracle holding the full state of the largest prefix queried so far.
#[derive(Clone)]
pub struct StatevectorOracle {
    circuit: Arc<Circuit>,
    cached: State,
    cached_t: usize,
    gate_applications: u64,
    counter: CallCounter,
}

impl StatevectorOracle {
    pub fn new(c: &Circuit) -> Result<Self> {
        Self::with_limit(c, STATEVECTOR_MAX_QUBITS)
    }

    pub fn with_limit(c: &Circuit, limit: usize) -> Result<Self> {
        guard(c.num_qubits(), limit)?;
        Ok(StatevectorOracle {
            circuit: Arc::new(c.clone()),
            cached: zero_state(c.num_qubits()),
            cached_t: 0,
            gate_applications: 0,
            counter: CallCounter::new(c.len()),
        })
    }

    /// Total single-gate applications performed, including recomputation
    /// for queries below the cached prefix.
    pub fn gate_applications(&self) -> u64 {
        self.gate_applications
    }

    /// Runs `f` on the prefix-`t` state.
    pub fn with_state<R>(&mut self, t: usize, f: impl FnOnce(&[Complex64]) -> R) -> Result<R> {
        check_prefix(t, self.circuit.len())?;
        if t >= self.cached_t {
            for idx in self.cached_t..t {
                apply_position(&mut self.cached, &self.circuit, idx);
                self.gate_applications += 1;
            }
            self.cached_t = t;
            Ok(f(&self.cached))
        } else {
            let mut s = zero_state(self.circuit.num_qubits());
            for idx in 0..t {
                apply_position(&mut s, &self.circuit, idx);
                self.gate_applications += 1;
            }
            Ok(f(&s))
        }
    }
}

impl AmplitudeOracle for StatevectorOracle {
    fn backend(&self) -> &'static str {
        "statevector"
    }

    fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    fn num_gates(&self) -> usize {
        self.circuit.len()
    }

    fn amplitude(&mut self, t: usize, x: BitString) -> Result<Complex64> {
        check_string(x, self.num_qubits())?;
        let a = self.with_state(t, |s| s[x.index()])?;
        self.counter.record(t);
        Ok(a)
    }

    fn supports_marginals(&self) -> bool {
        true
    }

    fn marginal_probability(&mut self, t: usize, prefix: BitString) -> Result<f64> {
        let n = self.num_qubits();
        let j = prefix.len();
        if j > n {
            return Err(Error::InvalidArgument(format!(
                "prefix of length {j} on {n} qubits"
            )));
        }
        let y = prefix.index();
        let p = self.with_state(t, |s| {
            (0..1usize << (n - j))
                .map(|h| s[(h << j) | y].norm_sqr())
                .sum::<f64>()
        })?;
        self.counter.record_marginal(t);
        Ok(p)
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn bell_amplitude_and_marginal() {
        let c = parse_circuit("qubits 2\nh 0\ncx 0 1").unwrap();
        let mut o = StatevectorOracle::new(&c).unwrap();
        assert!((o.amplitude(2, bs("00")).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((o.marginal_probability(2, bs("0")).unwrap() - 0.5).abs() < 1e-15);
        assert!((o.marginal_probability(2, BitString::zeros(0)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(o.amplitude(0, bs("00")).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn h_then_z() {
        let c = parse_circuit("qubits 1\nh 0\nz 0").unwrap();
        let mut o = StatevectorOracle::new(&c).unwrap();
        assert!((o.amplitude(2, bs("1")).unwrap().re + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn ghz_marginal_vanishes() {
        let c = parse_circuit("qubits 3\nh 0\ncx 0 1\ncx 1 2").unwrap();
        let mut o = StatevectorOracle::new(&c).unwrap();
        assert!(o.marginal_probability(3, bs("01")).unwrap().abs() < 1e-15);
    }

    #[test]
    fn monotone_queries_apply_each_gate_once() {
        let c = parse_circuit("qubits 2\nh 0\ncx 0 1\nh 1\nt 0").unwrap();
        let mut o = StatevectorOracle::new(&c).unwrap();
        for t in 0..=4 {
            o.amplitude(t, bs("00")).unwrap();
            o.amplitude(t, bs("11")).unwrap();
        }
        assert_eq!(o.gate_applications(), 4);
        assert_eq!(o.calls().total(), 10);
    }

    #[test]
    fn memory_guard() {
        let c = Circuit::new(27);
        assert!(matches!(
            StatevectorOracle::new(&c),
            Err(Error::Guard { .. })
        ));
    }
}
