use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use num_complex::Complex64;

use super::{check_prefix, check_string, AmplitudeOracle, CallCounter, CliffordState};
use crate::bits::BitString;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

/// Largest T-count accepted by the decomposition backend.
pub const MAX_T_COUNT: usize = 16;
const MAX_STORED_GATES: usize = 1 << 24;

/// `(α, β)` with `T = αI + βS`, i.e. `α + β = 1` and `α + iβ = e^{iπ/4}`.
pub fn t_coefficients() -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    let beta = (Complex64::from_polar(1.0, FRAC_PI_4) - 1.0) / (i - 1.0);
    (1.0 - beta, beta)
}

/// One term `c · C|0ⁿ⟩` of a stabilizer decomposition.
#[derive(Clone, Debug)]
pub struct StabilizerTerm {
    pub coefficient: Complex64,
    pub clifford: Circuit,
}

fn check_clifford_t(c: &Circuit) -> Result<usize> {
    if c.is_adaptive() {
        return Err(Error::UnsupportedGate("classically controlled gate".into()));
    }
    if let Some(g) = c
        .gates()
        .iter()
        .find(|g| !(g.kind().is_clifford() || g.kind().is_t()))
    {
        return Err(Error::UnsupportedGate(format!(
            "{} is not Clifford+T",
            g.label()
        )));
    }
    let l = c.t_count(c.len());
    if l > MAX_T_COUNT {
        return Err(Error::Guard {
            what: "T count",
            value: l,
            limit: MAX_T_COUNT,
        });
    }
    Ok(l)
}

/// Replacement branches for a T or T† gate: `(coefficient, Clifford or
/// None for identity)`.
fn t_branches(g: &Gate) -> [(Complex64, Option<Gate>); 2] {
    let (a, b) = t_coefficients();
    let q = g.support()[0];
    match g.kind() {
        GateKind::T => [(a, None), (b, Some(Gate::s(q)))],
        _ => [(a.conj(), None), (b.conj(), Some(Gate::sdg(q)))],
    }
}

/// Exact decomposition of every prefix state `U_t⋯U_1|0ⁿ⟩` into
/// `2^{ℓ_t}` stabilizer terms, `ℓ_t` being the prefix T-count.
pub fn stabilizer_decompose(c: &Circuit) -> Result<Vec<Vec<StabilizerTerm>>> {
    check_clifford_t(c)?;
    let n = c.num_qubits();
    let mut stored = 0usize;
    let mut current = vec![StabilizerTerm {
        coefficient: Complex64::new(1.0, 0.0),
        clifford: Circuit::new(n),
    }];
    let mut out = vec![current.clone()];
    for (t, g) in c.gates().iter().enumerate() {
        if g.kind().is_t() {
            let mut next = Vec::with_capacity(current.len() * 2);
            for term in &current {
                for (coef, gate) in t_branches(g) {
                    let mut clifford = term.clifford.clone();
                    if let Some(s) = gate {
                        clifford.push(s)?;
                    }
                    next.push(StabilizerTerm {
                        coefficient: term.coefficient * coef,
                        clifford,
                    });
                }
            }
            current = next;
        } else {
            for term in &mut current {
                term.clifford.push(g.clone())?;
            }
        }
        stored += current.len() * (t + 1);
        if stored > MAX_STORED_GATES {
            return Err(Error::Guard {
                what: "stored decomposition gates",
                value: stored,
                limit: MAX_STORED_GATES,
            });
        }
        out.push(current.clone());
    }
    Ok(out)
}

/// Sum-over-Cliffords oracle. Keeps the tableau terms of the largest prefix
/// reached and advances them gate by gate.
#[derive(Clone)]
pub struct StabDecompOracle {
    circuit: Arc<Circuit>,
    terms: Vec<(Complex64, CliffordState)>,
    cached_t: usize,
    counter: CallCounter,
}

impl StabDecompOracle {
    pub fn new(c: &Circuit) -> Result<Self> {
        check_clifford_t(c)?;
        Ok(StabDecompOracle {
            circuit: Arc::new(c.clone()),
            terms: Self::initial(c.num_qubits()),
            cached_t: 0,
            counter: CallCounter::new(c.len()),
        })
    }

    fn initial(n: usize) -> Vec<(Complex64, CliffordState)> {
        vec![(Complex64::new(1.0, 0.0), CliffordState::zero(n))]
    }

    /// Number of stabilizer terms for prefix `t`.
    pub fn term_count(&mut self, t: usize) -> Result<usize> {
        self.advance(t)?;
        Ok(self.terms.len())
    }

    fn advance(&mut self, t: usize) -> Result<()> {
        check_prefix(t, self.circuit.len())?;
        if t < self.cached_t {
            self.terms = Self::initial(self.circuit.num_qubits());
            self.cached_t = 0;
        }
        let circuit = Arc::clone(&self.circuit);
        for g in &circuit.gates()[self.cached_t..t] {
            if g.kind().is_t() {
                let mut next = Vec::with_capacity(self.terms.len() * 2);
                for (coef, state) in self.terms.drain(..) {
                    let [(a, _), (b, Some(s))] = t_branches(g) else {
                        unreachable!("second branch is always a phase gate")
                    };
                    let mut forked = state.clone();
                    forked.apply(&s)?;
                    next.push((coef * a, state));
                    next.push((coef * b, forked));
                }
                self.terms = next;
            } else {
                for (_, state) in &mut self.terms {
                    state.apply(g)?;
                }
            }
        }
        self.cached_t = t;
        Ok(())
    }
}

impl AmplitudeOracle for StabDecompOracle {
    fn backend(&self) -> &'static str {
        "stabdecomp"
    }

    fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    fn num_gates(&self) -> usize {
        self.circuit.len()
    }

    fn amplitude(&mut self, t: usize, x: BitString) -> Result<Complex64> {
        check_string(x, self.num_qubits())?;
        self.advance(t)?;
        self.counter.record(t);
        Ok(self
            .terms
            .iter_mut()
            .map(|(c, s)| *c * s.amplitude(x))
            .sum())
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
    use crate::backends::clifford_amplitude;
    use crate::circuit::parse_circuit;

    #[test]
    fn coefficients_solve_the_identity() {
        let (a, b) = t_coefficients();
        assert!((a + b - 1.0).norm() < 1e-15);
        let i = Complex64::new(0.0, 1.0);
        assert!((a + i * b - Complex64::from_polar(1.0, FRAC_PI_4)).norm() < 1e-15);
    }

    #[test]
    fn h_then_t() {
        let c = parse_circuit("qubits 1\nh 0\nt 0").unwrap();
        let terms = stabilizer_decompose(&c).unwrap();
        assert_eq!(terms[2].len(), 2);
        let x: BitString = "1".parse().unwrap();
        let a: Complex64 = terms[2]
            .iter()
            .map(|t| t.coefficient * clifford_amplitude(&t.clifford, x).unwrap())
            .sum();
        let expect = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, FRAC_PI_4);
        assert!((a - expect).norm() < 1e-12);
        let mut o = StabDecompOracle::new(&c).unwrap();
        assert!((o.amplitude(2, x).unwrap() - expect).norm() < 1e-12);
    }

    #[test]
    fn t_on_zero() {
        let c = parse_circuit("qubits 1\nt 0").unwrap();
        let mut o = StabDecompOracle::new(&c).unwrap();
        assert!((o.amplitude(1, "0".parse().unwrap()).unwrap() - 1.0).norm() < 1e-12);
        assert!(o.amplitude(1, "1".parse().unwrap()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn term_counts_double_per_t() {
        let c = parse_circuit("qubits 2\nh 0\nt 0\ncx 0 1\ntdg 1\nh 1\nt 0").unwrap();
        let terms = stabilizer_decompose(&c).unwrap();
        let counts: Vec<usize> = terms.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 2, 2, 4, 4, 8]);
        let mut o = StabDecompOracle::new(&c).unwrap();
        for (t, &k) in counts.iter().enumerate() {
            assert_eq!(o.term_count(t).unwrap(), k);
        }
    }

    #[test]
    fn rejects_rotations_and_large_t_count() {
        let c = parse_circuit("qubits 1\nrz 0 0.3").unwrap();
        assert!(StabDecompOracle::new(&c).is_err());
        let text = format!("qubits 1\n{}", "t 0\n".repeat(17));
        let c = parse_circuit(&text).unwrap();
        assert!(matches!(
            StabDecompOracle::new(&c),
            Err(Error::Guard { .. })
        ));
    }
}
