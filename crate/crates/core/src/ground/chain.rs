use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::rng;

/// Amplitudes with `|ψ(x)|²` at most this are outside the support.
pub const SUPPORT_TOL: f64 = 1e-24;
pub const CHAIN_MATRIX_MAX_STATES: usize = 4096;

/// Ratio access to a target law `π`.
pub trait GroundStateOracle: Sync {
    fn num_qubits(&self) -> usize;

    fn in_support(&self, x: BitString) -> Result<bool>;

    /// `π(y) / π(x)` for `x` in the support.
    fn ratio(&self, x: BitString, y: BitString) -> Result<f64>;
}

/// Oracle backed by the full probability vector of an exact ground state.
#[derive(Clone, Debug)]
pub struct ExactOracle {
    n: usize,
    pi: Vec<f64>,
}

impl ExactOracle {
    pub fn new(n: usize, pi: Vec<f64>) -> Self {
        assert_eq!(pi.len(), 1 << n);
        ExactOracle { n, pi }
    }

    pub fn from_state(n: usize, psi: &[num_complex::Complex64]) -> Self {
        Self::new(n, psi.iter().map(|a| a.norm_sqr()).collect())
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.pi
    }

    /// Support in index order.
    pub fn support(&self) -> Vec<BitString> {
        (0..self.pi.len())
            .filter(|&i| self.pi[i] > SUPPORT_TOL)
            .map(|i| BitString::from_index(i, self.n))
            .collect()
    }
}

impl GroundStateOracle for ExactOracle {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn in_support(&self, x: BitString) -> Result<bool> {
        Ok(self.pi[x.index()] > SUPPORT_TOL)
    }

    fn ratio(&self, x: BitString, y: BitString) -> Result<f64> {
        let px = self.pi[x.index()];
        if px <= SUPPORT_TOL {
            return Err(Error::OutsideSupport(x.to_string()));
        }
        let py = self.pi[y.index()];
        Ok(if py > SUPPORT_TOL { py / px } else { 0.0 })
    }
}

/// Proposal radius, run length and start state of a chain.
#[derive(Clone, Debug)]
pub struct ChainConfig {
    pub n: usize,
    pub k: usize,
    pub steps: u64,
    pub seed: u64,
    pub x_in: BitString,
    /// Target total-variation error used by the mixing-time estimate.
    pub epsilon: f64,
}

impl ChainConfig {
    pub fn new(x_in: BitString, k: usize, steps: u64, seed: u64) -> Self {
        ChainConfig {
            n: x_in.len(),
            k: k.min(x_in.len()),
            steps,
            seed,
            x_in,
            epsilon: 0.01,
        }
    }

    /// `N = Σ_{j=0}^{k} C(n, j)`.
    pub fn proposal_count(&self) -> u128 {
        binomial_sum(self.n, self.k)
    }
}

pub fn binomial(n: usize, j: usize) -> u128 {
    if j > n {
        return 0;
    }
    let j = j.min(n - j);
    (0..j).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn binomial_sum(n: usize, k: usize) -> u128 {
    (0..=k.min(n)).map(|j| binomial(n, j)).sum()
}

/// Flips a uniformly random subset of at most `k` bits; every `y` with
/// `d(x, y) ≤ k`, including `x` itself, has probability `1/N`.
pub fn propose<R: Rng + ?Sized>(x: BitString, cfg: &ChainConfig, rng: &mut R) -> BitString {
    let total = cfg.proposal_count();
    let mut r = rng.random_range(0..total);
    let mut j = 0;
    loop {
        let c = binomial(cfg.n, j);
        if r < c {
            break;
        }
        r -= c;
        j += 1;
    }
    let mut y = x;
    for q in sample(rng, cfg.n, j) {
        y = y.flipped(q);
    }
    y
}

/// Outcome of one lazy Metropolis–Hastings step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Held,
    SelfProposal,
    OutsideSupport,
    Rejected,
    Accepted,
}

/// One step: hold on a fair coin, otherwise propose and accept with
/// `min(1, π(y)/π(x))`.
pub fn metropolis_step<R: Rng + ?Sized>(
    x: BitString,
    o: &dyn GroundStateOracle,
    cfg: &ChainConfig,
    rng: &mut R,
) -> Result<(BitString, StepOutcome)> {
    if rng.random_bool(0.5) {
        return Ok((x, StepOutcome::Held));
    }
    let y = propose(x, cfg, rng);
    if y == x {
        return Ok((x, StepOutcome::SelfProposal));
    }
    if !o.in_support(y)? {
        return Ok((x, StepOutcome::OutsideSupport));
    }
    let r = o.ratio(x, y)?;
    if r >= 1.0 || rng.random::<f64>() < r {
        Ok((y, StepOutcome::Accepted))
    } else {
        Ok((x, StepOutcome::Rejected))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainStats {
    pub steps: u64,
    pub held: u64,
    pub self_proposals: u64,
    pub outside_support: u64,
    pub rejected: u64,
    pub accepted: u64,
}

impl ChainStats {
    fn record(&mut self, o: StepOutcome) {
        self.steps += 1;
        match o {
            StepOutcome::Held => self.held += 1,
            StepOutcome::SelfProposal => self.self_proposals += 1,
            StepOutcome::OutsideSupport => self.outside_support += 1,
            StepOutcome::Rejected => self.rejected += 1,
            StepOutcome::Accepted => self.accepted += 1,
        }
    }

    pub fn merge(&mut self, other: &ChainStats) {
        self.steps += other.steps;
        self.held += other.held;
        self.self_proposals += other.self_proposals;
        self.outside_support += other.outside_support;
        self.rejected += other.rejected;
        self.accepted += other.accepted;
    }

    /// Ratio-oracle calls made (one per in-support proposal).
    pub fn ratio_calls(&self) -> u64 {
        self.rejected + self.accepted
    }
}

/// Runs `cfg.steps` steps from `cfg.x_in` with the generator `rng`.
pub fn run_chain_with<R: Rng + ?Sized>(
    o: &dyn GroundStateOracle,
    cfg: &ChainConfig,
    rng: &mut R,
) -> Result<(BitString, ChainStats)> {
    if !o.in_support(cfg.x_in)? {
        return Err(Error::OutsideSupport(cfg.x_in.to_string()));
    }
    let mut x = cfg.x_in;
    let mut stats = ChainStats::default();
    for _ in 0..cfg.steps {
        let (y, outcome) = metropolis_step(x, o, cfg, rng)?;
        stats.record(outcome);
        x = y;
    }
    Ok((x, stats))
}

/// Runs one chain seeded from `cfg.seed`.
pub fn run_chain(o: &dyn GroundStateOracle, cfg: &ChainConfig) -> Result<(BitString, ChainStats)> {
    run_chain_with(o, cfg, &mut rng::seeded(cfg.seed))
}

/// Runs `chains` independent chains; chain `i` uses stream `i` of
/// `cfg.seed`.
pub fn run_chains(
    o: &dyn GroundStateOracle,
    cfg: &ChainConfig,
    chains: usize,
) -> Result<(Vec<BitString>, ChainStats)> {
    let results: Vec<(BitString, ChainStats)> = (0..chains)
        .into_par_iter()
        .map(|i| run_chain_with(o, cfg, &mut rng::stream(cfg.seed, i as u64)))
        .collect::<Result<_>>()?;
    let mut stats = ChainStats::default();
    let finals = results
        .into_iter()
        .map(|(x, s)| {
            stats.merge(&s);
            x
        })
        .collect();
    Ok((finals, stats))
}

/// Explicit transition matrix of the lazy chain on a given support.
#[derive(Clone, Debug)]
pub struct ChainMatrix {
    pub states: Vec<BitString>,
    pub p: DMatrix<f64>,
    /// Stationary law reconstructed from ratios.
    pub pi: Vec<f64>,
    /// Eigenvalues of `P` in decreasing order.
    pub eigenvalues: Vec<f64>,
    /// Second largest eigenvalue (0 for a single-state support).
    pub lambda1: f64,
    pub detailed_balance_residual: f64,
    pub row_sum_residual: f64,
}

impl ChainMatrix {
    pub fn index_of(&self, x: BitString) -> Option<usize> {
        self.states.binary_search(&x).ok()
    }

    /// `e_x P^t` for `t = 0..=steps`.
    pub fn evolve(&self, start: usize, steps: usize) -> Vec<Vec<f64>> {
        let s = self.states.len();
        let mut cur = vec![0.0; s];
        cur[start] = 1.0;
        let mut out = vec![cur.clone()];
        for _ in 0..steps {
            let mut next = vec![0.0; s];
            for (i, &c) in cur.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                for (j, nx) in next.iter_mut().enumerate() {
                    *nx += c * self.p[(i, j)];
                }
            }
            cur = next;
            out.push(cur.clone());
        }
        out
    }
}

/// Builds `P_{xy} = ½ (1/N) min(1, π(y)/π(x))` on `support` and its
/// spectrum.
pub fn chain_matrix(
    o: &dyn GroundStateOracle,
    support: &[BitString],
    cfg: &ChainConfig,
) -> Result<ChainMatrix> {
    let s = support.len();
    if s > CHAIN_MATRIX_MAX_STATES {
        return Err(Error::Guard {
            what: "chain support size",
            value: s,
            limit: CHAIN_MATRIX_MAX_STATES,
        });
    }
    if s == 0 {
        return Err(Error::InvalidArgument("empty support".into()));
    }
    let mut states = support.to_vec();
    states.sort();
    states.dedup();
    let s = states.len();
    let inv_n = 1.0 / cfg.proposal_count() as f64;
    let mut p = DMatrix::<f64>::zeros(s, s);
    for i in 0..s {
        let mut off = 0.0;
        for j in 0..s {
            if i == j || states[i].hamming(&states[j]) as usize > cfg.k {
                continue;
            }
            let v = 0.5 * inv_n * o.ratio(states[i], states[j])?.min(1.0);
            p[(i, j)] = v;
            off += v;
        }
        p[(i, i)] = 1.0 - off;
    }
    let pi = stationary_from_ratios(o, &states, &p)?;

    let mut db = 0.0f64;
    let mut rows = 0.0f64;
    for i in 0..s {
        rows = rows.max((p.row(i).sum() - 1.0).abs());
        for j in 0..s {
            db = db.max((pi[i] * p[(i, j)] - pi[j] * p[(j, i)]).abs());
        }
    }
    let sq: Vec<f64> = pi.iter().map(|v| v.sqrt()).collect();
    let sym = DMatrix::<f64>::from_fn(s, s, |i, j| {
        let a = sq[i] * p[(i, j)] / sq[j];
        let b = sq[j] * p[(j, i)] / sq[i];
        0.5 * (a + b)
    });
    let mut eigenvalues: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let lambda1 = eigenvalues.get(1).copied().unwrap_or(0.0);
    Ok(ChainMatrix {
        states,
        p,
        pi,
        eigenvalues,
        lambda1,
        detailed_balance_residual: db,
        row_sum_residual: rows,
    })
}

/// Stationary law from products of ratios along chain moves out of
/// `states[0]`.
fn stationary_from_ratios(
    o: &dyn GroundStateOracle,
    states: &[BitString],
    p: &DMatrix<f64>,
) -> Result<Vec<f64>> {
    let s = states.len();
    let mut weight = vec![f64::NAN; s];
    weight[0] = 1.0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..s {
            if weight[j].is_nan() && i != j && p[(i, j)] > 0.0 {
                weight[j] = weight[i] * o.ratio(states[i], states[j])?;
                queue.push_back(j);
            }
        }
    }
    if let Some(j) = weight.iter().position(|w| w.is_nan()) {
        return Err(Error::InvalidArgument(format!(
            "state {} is not reachable from {} by chain moves",
            states[j], states[0]
        )));
    }
    let z: f64 = weight.iter().sum();
    Ok(weight.into_iter().map(|w| w / z).collect())
}

/// Distance of `e_{x_in} P^t` from `π` against `λ₁^t / (2√π(x_in))`.
#[derive(Clone, Debug)]
pub struct TvDecay {
    pub steps: usize,
    /// Largest `‖·‖_TV − bound` over `t` (≤ 0 when the bound holds).
    pub worst_tv_excess: f64,
    /// Same with the plain L1 distance in place of TV.
    pub worst_l1_excess: f64,
    pub tv_violations: usize,
    pub l1_violations: usize,
}

pub fn tv_decay(cm: &ChainMatrix, x_in: BitString, steps: usize) -> Result<TvDecay> {
    let start = cm
        .index_of(x_in)
        .ok_or_else(|| Error::OutsideSupport(x_in.to_string()))?;
    let pi_in = cm.pi[start];
    let mut out = TvDecay {
        steps,
        worst_tv_excess: f64::NEG_INFINITY,
        worst_l1_excess: f64::NEG_INFINITY,
        tv_violations: 0,
        l1_violations: 0,
    };
    for (t, law) in cm.evolve(start, steps).iter().enumerate() {
        let l1: f64 = law.iter().zip(&cm.pi).map(|(a, b)| (a - b).abs()).sum();
        let bound = cm.lambda1.max(0.0).powi(t as i32) / (2.0 * pi_in.sqrt());
        let slack = 1e-12;
        out.worst_tv_excess = out.worst_tv_excess.max(l1 / 2.0 - bound);
        out.worst_l1_excess = out.worst_l1_excess.max(l1 - bound);
        out.tv_violations += (l1 / 2.0 > bound + slack) as usize;
        out.l1_violations += (l1 > bound + slack) as usize;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn binomial_sums() {
        assert_eq!(binomial_sum(4, 2), 11);
        assert_eq!(binomial_sum(5, 5), 32);
        assert_eq!(binomial_sum(64, 64), 1u128 << 64);
    }

    #[test]
    fn radius_zero_never_moves() {
        let cfg = ChainConfig::new(bs("0110"), 0, 10, 1);
        let mut g = rng::seeded(1);
        for _ in 0..100 {
            assert_eq!(propose(bs("0110"), &cfg, &mut g), bs("0110"));
        }
    }

    #[test]
    fn zero_steps_returns_start() {
        let o = ExactOracle::new(2, vec![0.25; 4]);
        let cfg = ChainConfig::new(bs("10"), 1, 0, 4);
        assert_eq!(run_chain(&o, &cfg).unwrap().0, bs("10"));
    }

    #[test]
    fn start_outside_support() {
        let o = ExactOracle::new(1, vec![1.0, 0.0]);
        let cfg = ChainConfig::new(bs("1"), 1, 5, 4);
        assert!(matches!(run_chain(&o, &cfg), Err(Error::OutsideSupport(_))));
    }

    #[test]
    fn uniform_chain_matrix() {
        let o = ExactOracle::new(2, vec![0.25; 4]);
        let cfg = ChainConfig::new(bs("00"), 2, 0, 0);
        let cm = chain_matrix(&o, &o.support(), &cfg).unwrap();
        for i in 0..4 {
            assert!((cm.pi[i] - 0.25).abs() < 1e-15);
            for j in 0..4 {
                let expect = if i == j { 1.0 - 3.0 / 8.0 } else { 1.0 / 8.0 };
                assert!((cm.p[(i, j)] - expect).abs() < 1e-15);
            }
        }
        assert!((cm.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((cm.lambda1 - 0.5).abs() < 1e-12);
    }
}
