//! Amplitude oracles: `amplitude(t, x) = ⟨x|U_t⋯U_1|0ⁿ⟩`.

mod clifford;
mod decomposition;
mod noisy;
mod pathsum;
mod statevector;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

pub use clifford::{clifford_amplitude, CliffordState, Pauli};
pub use decomposition::{
    stabilizer_decompose, t_coefficients, StabDecompOracle, StabilizerTerm, MAX_T_COUNT,
};
pub use noisy::{NoisePlan, NoisyOracle};
pub use pathsum::{PathSumOracle, DEFAULT_MEMO_BYTES};
pub use statevector::{StatevectorOracle, STATEVECTOR_MAX_QUBITS};

use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Exact per-prefix tallies of oracle invocations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CallCounter {
    amplitude: Vec<u64>,
    marginal: Vec<u64>,
}

impl CallCounter {
    pub fn new(m: usize) -> Self {
        CallCounter {
            amplitude: vec![0; m + 1],
            marginal: vec![0; m + 1],
        }
    }

    #[inline]
    pub fn record(&mut self, t: usize) {
        self.amplitude[t] += 1;
    }

    #[inline]
    pub fn record_marginal(&mut self, t: usize) {
        self.marginal[t] += 1;
    }

    /// `amplitude()` calls made with prefix length `t`.
    pub fn at(&self, t: usize) -> u64 {
        self.amplitude[t]
    }

    pub fn per_prefix(&self) -> &[u64] {
        &self.amplitude
    }

    pub fn total(&self) -> u64 {
        self.amplitude.iter().sum()
    }

    pub fn total_marginal(&self) -> u64 {
        self.marginal.iter().sum()
    }

    pub fn reset(&mut self) {
        self.amplitude.iter_mut().for_each(|c| *c = 0);
        self.marginal.iter_mut().for_each(|c| *c = 0);
    }
}

/// Uniform interface consumed by every sampler.
///
/// Implementations are not shared between threads; each worker clones its
/// own instance with [`AmplitudeOracle::clone_box`].
pub trait AmplitudeOracle: Send + Sync {
    fn backend(&self) -> &'static str;

    fn num_qubits(&self) -> usize;

    /// `m`; valid prefix lengths are `0..=m`.
    fn num_gates(&self) -> usize;

    fn amplitude(&mut self, t: usize, x: BitString) -> Result<Complex64>;

    fn supports_marginals(&self) -> bool {
        false
    }

    /// `π_j(y) = Σ_z |amplitude(t, y·z)|²` for the prefix `y` on qubits
    /// `0..j`.
    fn marginal_probability(&mut self, t: usize, prefix: BitString) -> Result<f64> {
        let _ = (t, prefix);
        Err(Error::MarginalsUnsupported(self.backend()))
    }

    /// Squared norm of the prefix state; 1 for exact oracles.
    fn norm_sqr(&mut self, t: usize) -> Result<f64> {
        check_prefix(t, self.num_gates())?;
        Ok(1.0)
    }

    fn calls(&self) -> &CallCounter;

    fn reset_calls(&mut self);

    fn clone_box(&self) -> Box<dyn AmplitudeOracle>;
}

impl Clone for Box<dyn AmplitudeOracle> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

pub(crate) fn check_prefix(t: usize, m: usize) -> Result<()> {
    if t > m {
        Err(Error::PrefixOutOfRange { t, m })
    } else {
        Ok(())
    }
}

pub(crate) fn check_string(x: BitString, n: usize) -> Result<()> {
    if x.len() != n {
        Err(Error::InvalidArgument(format!(
            "bit string has length {}, expected {n}",
            x.len()
        )))
    } else {
        Ok(())
    }
}

/// Backend selector used by the CLI and verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Statevector,
    PathSum,
    StabDecomp,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Statevector, Backend::PathSum, Backend::StabDecomp];

    pub fn build(self, c: &Circuit) -> Result<Box<dyn AmplitudeOracle>> {
        Ok(match self {
            Backend::Statevector => Box::new(StatevectorOracle::new(c)?),
            Backend::PathSum => Box::new(PathSumOracle::new(c)),
            Backend::StabDecomp => Box::new(StabDecompOracle::new(c)?),
        })
    }

    /// Like [`Backend::build`] but lifts the qubit-count guard.
    pub fn build_unguarded(self, c: &Circuit) -> Result<Box<dyn AmplitudeOracle>> {
        match self {
            Backend::Statevector => Ok(Box::new(StatevectorOracle::with_limit(c, 30)?)),
            b => b.build(c),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Statevector => "statevector",
            Backend::PathSum => "pathsum",
            Backend::StabDecomp => "stabdecomp",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "statevector" => Ok(Backend::Statevector),
            "pathsum" => Ok(Backend::PathSum),
            "stabdecomp" => Ok(Backend::StabDecomp),
            other => Err(Error::InvalidArgument(format!("unknown backend `{other}`"))),
        }
    }
}

pub fn build_statevector_oracle(c: &Circuit) -> Result<StatevectorOracle> {
    StatevectorOracle::new(c)
}

pub fn build_pathsum_oracle(c: &Circuit) -> PathSumOracle {
    PathSumOracle::new(c)
}

pub fn build_stabdecomp_oracle(c: &Circuit) -> Result<StabDecompOracle> {
    StabDecompOracle::new(c)
}

pub fn wrap_noisy_oracle(inner: Box<dyn AmplitudeOracle>, plan: NoisePlan) -> Result<NoisyOracle> {
    NoisyOracle::new(inner, plan)
}

/// Free-function form of [`AmplitudeOracle::marginal_probability`].
pub fn marginal_probability(
    o: &mut dyn AmplitudeOracle,
    t: usize,
    prefix: BitString,
) -> Result<f64> {
    o.marginal_probability(t, prefix)
}
