use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::Distribution;
use crate::backends::AmplitudeOracle;
use crate::bits::BitString;
use crate::circuit::{Circuit, GateClass};
use crate::error::{Error, Result};
use crate::rng;
use crate::statevector::guard;

/// Branch sets with total oracle mass below this are treated as an oracle
/// inconsistency.
pub const ZERO_MASS_TOL: f64 = 1e-14;
pub const INDUCED_MAX_QUBITS: usize = 10;
/// Reached strings with induced probability at most this may be dropped
/// when their branch mass vanishes.
const NEGLIGIBLE_MASS: f64 = 1e-12;

/// How branch probabilities are obtained from the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryMode {
    /// `P_t(y) = |amplitude(t, y)|²`.
    Prefix,
    /// `R_t(y) ∝ |⟨y|U_t|φ_{t−1}⟩|²`, evaluated from `amplitude(t − 1, ·)`
    /// on the same branch set by applying `U_t` locally.
    LocalUpdate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerOptions {
    pub skip_diagonal: bool,
    pub permutation_shortcut: bool,
    pub query: QueryMode,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            skip_diagonal: true,
            permutation_shortcut: true,
            query: QueryMode::Prefix,
        }
    }
}

impl SamplerOptions {
    /// Every iteration resamples from `R_t`; the setting analysed for
    /// approximate oracles.
    pub fn robust() -> Self {
        SamplerOptions {
            skip_diagonal: false,
            permutation_shortcut: false,
            query: QueryMode::LocalUpdate,
        }
    }

    /// No shortcuts, prefix queries.
    pub fn plain() -> Self {
        SamplerOptions {
            skip_diagonal: false,
            permutation_shortcut: false,
            query: QueryMode::Prefix,
        }
    }
}

/// What one iteration did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepAction {
    DiagonalSkip,
    Permutation,
    /// Resampled the bits on `support`, i.e. the branch set
    /// `S = {y : y agrees with x off support}`, using `evaluations`
    /// oracle probabilities.
    Branch {
        support: Vec<usize>,
        evaluations: usize,
    },
}

#[derive(Clone, Debug)]
pub struct SampleTrace {
    pub output: BitString,
    pub steps: Vec<StepAction>,
}

impl SampleTrace {
    pub fn per_gate_evaluations(&self) -> Vec<usize> {
        self.steps
            .iter()
            .map(|s| match s {
                StepAction::Branch { evaluations, .. } => *evaluations,
                _ => 0,
            })
            .collect()
    }

    /// Total oracle probability evaluations.
    pub fn evaluations(&self) -> usize {
        self.per_gate_evaluations().iter().sum()
    }

    pub fn diagonal_skips(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| **s == StepAction::DiagonalSkip)
            .count()
    }

    pub fn permutations(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| **s == StepAction::Permutation)
            .count()
    }
}

/// Transition law of one iteration from a fixed current string.
pub(crate) enum StepLaw {
    Stay,
    Move(BitString),
    Branch {
        support: Vec<usize>,
        /// Unnormalized branch weights in enumeration order.
        weights: Vec<(BitString, f64)>,
        total: f64,
    },
}

fn check_oracle(c: &Circuit, o: &dyn AmplitudeOracle) -> Result<()> {
    if o.num_qubits() != c.num_qubits() || o.num_gates() != c.len() {
        return Err(Error::InvalidArgument(format!(
            "oracle describes {} qubits and {} gates, circuit has {} and {}",
            o.num_qubits(),
            o.num_gates(),
            c.num_qubits(),
            c.len()
        )));
    }
    Ok(())
}

/// Iteration `t = idx + 1` of the gate-by-gate sampler from string `x`.
pub(crate) fn step_law(
    c: &Circuit,
    o: &mut dyn AmplitudeOracle,
    opts: &SamplerOptions,
    idx: usize,
    x: BitString,
) -> Result<StepLaw> {
    let t = idx + 1;
    let g = c.resolve(idx, x);
    match g.class() {
        GateClass::Diagonal if opts.skip_diagonal => return Ok(StepLaw::Stay),
        GateClass::Diagonal | GateClass::BasisPermutation if opts.permutation_shortcut => {
            return Ok(StepLaw::Move(g.apply_permutation(x)?.0))
        }
        _ => {}
    }
    let support = g.support().to_vec();
    let dim = g.dim();
    let branches: Vec<BitString> = (0..dim as u64)
        .map(|v| x.with_restriction(&support, v))
        .collect();
    let weights: Vec<(BitString, f64)> = match opts.query {
        QueryMode::Prefix => branches
            .iter()
            .map(|&y| Ok((y, o.amplitude(t, y)?.norm_sqr())))
            .collect::<Result<_>>()?,
        QueryMode::LocalUpdate => {
            let prev: Vec<Complex64> = branches
                .iter()
                .map(|&y| o.amplitude(t - 1, y))
                .collect::<Result<_>>()?;
            branches
                .iter()
                .enumerate()
                .map(|(row, &y)| {
                    let a: Complex64 = (0..dim).map(|col| g.entry(row, col) * prev[col]).sum();
                    (y, a.norm_sqr())
                })
                .collect()
        }
    };
    let total = weights.iter().map(|w| w.1).sum();
    Ok(StepLaw::Branch {
        support,
        weights,
        total,
    })
}

fn draw<R: Rng + ?Sized>(weights: &[(BitString, f64)], total: f64, rng: &mut R) -> BitString {
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for &(y, w) in weights {
        acc += w;
        if u < acc {
            return y;
        }
    }
    weights
        .iter()
        .rev()
        .find(|w| w.1 > 0.0)
        .expect("positive total mass")
        .0
}

/// One run of the gate-by-gate sampler.
pub fn gate_by_gate_sample<R: Rng + ?Sized>(
    c: &Circuit,
    o: &mut dyn AmplitudeOracle,
    opts: &SamplerOptions,
    rng: &mut R,
) -> Result<SampleTrace> {
    check_oracle(c, o)?;
    let mut x = BitString::zeros(c.num_qubits());
    let mut steps = Vec::with_capacity(c.len());
    for idx in 0..c.len() {
        match step_law(c, o, opts, idx, x)? {
            StepLaw::Stay => steps.push(StepAction::DiagonalSkip),
            StepLaw::Move(y) => {
                x = y;
                steps.push(StepAction::Permutation);
            }
            StepLaw::Branch {
                support,
                weights,
                total,
            } => {
                if total.is_nan() || total < ZERO_MASS_TOL {
                    return Err(Error::ZeroBranchMass {
                        t: idx + 1,
                        mass: total,
                    });
                }
                x = draw(&weights, total, rng);
                steps.push(StepAction::Branch {
                    evaluations: weights.len(),
                    support,
                });
            }
        }
    }
    Ok(SampleTrace { output: x, steps })
}

/// Runs `shots` independent samples; shot `i` uses generator stream `i` of
/// `seed`, so the result does not depend on the number of threads.
pub fn sample_shots(
    c: &Circuit,
    oracle: &dyn AmplitudeOracle,
    opts: &SamplerOptions,
    shots: usize,
    seed: u64,
) -> Result<Vec<SampleTrace>> {
    (0..shots)
        .into_par_iter()
        .map_init(
            || oracle.clone_box(),
            |o, i| {
                let mut g = rng::stream(seed, i as u64);
                gate_by_gate_sample(c, o.as_mut(), opts, &mut g)
            },
        )
        .collect()
}

/// Exact output law of the sampler, obtained by pushing the distribution of
/// the current string through every iteration's transition law.
pub fn induced_sampler_distribution(
    c: &Circuit,
    o: &mut dyn AmplitudeOracle,
    opts: &SamplerOptions,
) -> Result<Distribution> {
    guard(c.num_qubits(), INDUCED_MAX_QUBITS)?;
    check_oracle(c, o)?;
    let n = c.num_qubits();
    let mut q = Distribution::point(BitString::zeros(n));
    for idx in 0..c.len() {
        let mut next = Distribution::new(n);
        for (x, p) in q.iter() {
            if p == 0.0 {
                continue;
            }
            match step_law(c, o, opts, idx, x)? {
                StepLaw::Stay => next.add(x, p),
                StepLaw::Move(y) => next.add(y, p),
                StepLaw::Branch { weights, total, .. } => {
                    if total.is_nan() || total < ZERO_MASS_TOL {
                        if p <= NEGLIGIBLE_MASS {
                            continue;
                        }
                        return Err(Error::ZeroBranchMass {
                            t: idx + 1,
                            mass: total,
                        });
                    }
                    for (y, w) in weights {
                        if w > 0.0 {
                            next.add(y, p * w / total);
                        }
                    }
                }
            }
        }
        q = next;
    }
    Ok(q)
}
