use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_prefix, check_string, AmplitudeOracle, CallCounter};
use crate::bits::BitString;
use crate::error::{parse_err, Error, Result};
use crate::rng;
use crate::statevector::guard;

pub const NOISY_MAX_QUBITS: usize = 12;

/// Perturbation sizes `ε_t` for prefixes `t = 1..=m`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoisePlan {
    /// `eps[t - 1] = ε_t`.
    pub eps: Vec<f64>,
    pub seed: u64,
}

impl NoisePlan {
    pub fn new(eps: Vec<f64>, seed: u64) -> Result<Self> {
        if let Some(e) = eps.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "perturbation size {e} must be finite and nonnegative"
            )));
        }
        Ok(NoisePlan { eps, seed })
    }

    pub fn uniform(m: usize, eps: f64, seed: u64) -> Result<Self> {
        Self::new(vec![eps; m], seed)
    }

    pub fn zero(m: usize) -> Self {
        NoisePlan {
            eps: vec![0.0; m],
            seed: 0,
        }
    }

    pub fn epsilon(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.eps.get(t - 1).copied().unwrap_or(0.0)
        }
    }

    /// `16 Σ_{t=1}^{m-1} ε_t`, the bound on the sampler's L1 error.
    pub fn l1_bound(&self) -> f64 {
        let m = self.eps.len();
        16.0 * self.eps[..m.saturating_sub(1)].iter().sum::<f64>()
    }

    /// Parses `seed S` and `t eps` lines for a circuit with `m` gates.
    pub fn from_text(text: &str, m: usize) -> Result<Self> {
        let mut eps = vec![0.0; m];
        let mut seed = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["seed", s] => {
                    seed = s
                        .parse()
                        .map_err(|_| parse_err(i + 1, format!("invalid seed `{s}`")))?
                }
                [t, e] => {
                    let t: usize = t
                        .parse()
                        .map_err(|_| parse_err(i + 1, format!("invalid prefix `{t}`")))?;
                    if t == 0 || t > m {
                        return Err(parse_err(i + 1, format!("prefix {t} outside 1..={m}")));
                    }
                    eps[t - 1] = e
                        .parse()
                        .map_err(|_| parse_err(i + 1, format!("invalid epsilon `{e}`")))?;
                }
                _ => return Err(parse_err(i + 1, "expected `seed S` or `t epsilon`")),
            }
        }
        Self::new(eps, seed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {}\n", self.seed);
        for (i, e) in self.eps.iter().enumerate() {
            out.push_str(&format!("{} {}\n", i + 1, e));
        }
        out
    }
}

/// Answers `⟨x|φ_t⟩` for `φ_t = ψ_t + e_t`, `‖e_t‖ = ε_t`.
pub struct NoisyOracle {
    inner: Box<dyn AmplitudeOracle>,
    plan: NoisePlan,
    states: HashMap<usize, Vec<Complex64>>,
    realized: HashMap<usize, f64>,
    counter: CallCounter,
}

impl Clone for NoisyOracle {
    fn clone(&self) -> Self {
        NoisyOracle {
            inner: self.inner.clone_box(),
            plan: self.plan.clone(),
            states: self.states.clone(),
            realized: self.realized.clone(),
            counter: self.counter.clone(),
        }
    }
}

impl NoisyOracle {
    pub fn new(inner: Box<dyn AmplitudeOracle>, plan: NoisePlan) -> Result<Self> {
        guard(inner.num_qubits(), NOISY_MAX_QUBITS)?;
        if plan.eps.len() != inner.num_gates() {
            return Err(Error::InvalidArgument(format!(
                "noise plan covers {} prefixes, circuit has {} gates",
                plan.eps.len(),
                inner.num_gates()
            )));
        }
        let m = inner.num_gates();
        Ok(NoisyOracle {
            inner,
            plan,
            states: HashMap::new(),
            realized: HashMap::new(),
            counter: CallCounter::new(m),
        })
    }

    pub fn plan(&self) -> &NoisePlan {
        &self.plan
    }

    fn state(&mut self, t: usize) -> Result<&Vec<Complex64>> {
        check_prefix(t, self.inner.num_gates())?;
        if !self.states.contains_key(&t) {
            let n = self.inner.num_qubits();
            let mut psi = Vec::with_capacity(1 << n);
            for x in BitString::iter_all(n) {
                psi.push(self.inner.amplitude(t, x)?);
            }
            let eps = self.plan.epsilon(t);
            let mut phi = psi.clone();
            if eps > 0.0 {
                let mut g = rng::stream(self.plan.seed, t as u64);
                let e: Vec<Complex64> = (0..psi.len())
                    .map(|_| Complex64::new(g.sample(StandardNormal), g.sample(StandardNormal)))
                    .collect();
                let norm = e.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
                for (p, d) in phi.iter_mut().zip(&e) {
                    *p += d * (eps / norm);
                }
            }
            let realized = phi
                .iter()
                .zip(&psi)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            self.realized.insert(t, realized);
            self.states.insert(t, phi);
        }
        Ok(&self.states[&t])
    }

    /// `‖φ_t − ψ_t‖` as constructed.
    pub fn realized_epsilon(&mut self, t: usize) -> Result<f64> {
        self.state(t)?;
        Ok(self.realized[&t])
    }
}

impl AmplitudeOracle for NoisyOracle {
    fn backend(&self) -> &'static str {
        "noisy"
    }

    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    fn num_gates(&self) -> usize {
        self.inner.num_gates()
    }

    fn amplitude(&mut self, t: usize, x: BitString) -> Result<Complex64> {
        check_string(x, self.num_qubits())?;
        let a = self.state(t)?[x.index()];
        self.counter.record(t);
        Ok(a)
    }

    fn norm_sqr(&mut self, t: usize) -> Result<f64> {
        Ok(self.state(t)?.iter().map(Complex64::norm_sqr).sum())
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
