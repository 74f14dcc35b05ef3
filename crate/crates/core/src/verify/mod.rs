//! Self-contained verification suites. Each suite draws its own instances
//! from a seed, compares against independent computations and reports one
//! line per check.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use crate::backends::{
    AmplitudeOracle, NoisePlan, NoisyOracle, PathSumOracle, StabDecompOracle, StatevectorOracle,
};
use crate::bits::BitString;
use crate::circuit::random::{
    random_adaptive_circuit, random_circuit, random_clifford_circuit, random_clifford_gate,
    random_clifford_t_circuit, random_cnot_su2_circuit,
};
use crate::circuit::{Circuit, Gate, GateClass};
use crate::error::{Error, Result};
use crate::ground::random::{
    random_k_local, random_magic, random_magic_zero_support, random_stoquastic, tfim,
};
use crate::ground::{
    chain_matrix, exact_ground_state, gap_bound_check, run_chains, sensitivity,
    stoquastic_check_and_bound, tv_decay, verify_magic_ratio_structure, ChainConfig, ExactOracle,
    SparseHamiltonian,
};
use crate::rng::SeededRng;
use crate::samplers::{
    allocate_error_budget, chi_square_gof, gate_by_gate_sample, gate_xi,
    induced_sampler_distribution, reference_distribution, tv_distance, xi_rz, Distribution,
    SamplerOptions, StepAction,
};
use crate::surface::{
    grid, k33_one_crossing, k4, mbqc_sample, polygon, random_schedule, reduction_with, triple_edge,
    verify_gadgets_with, Drawing, Edge, GammaWeights, PlanarGraph, SurfaceCodeInstance,
    ThetaWeights,
};

pub const EXACT_TOL: f64 = 1e-9;
pub const DETAILED_BALANCE_TOL: f64 = 1e-10;
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-12;
pub const BUDGET_SUM_TOL: f64 = 1e-12;
pub const RATIO_TOL: f64 = 1e-8;
pub const MBQC_TOL: f64 = 1e-8;
pub const GROUND_TV_TOL: f64 = 0.03;
pub const TAU_TARGET: f64 = 3.732;
pub const TAU_TOL: f64 = 1e-3;
pub const CHI_SQUARE_ALPHA: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Exactness,
    Backends,
    Robustness,
    Accounting,
    Budget,
    Mcmc,
    Sensitivity,
    GroundSampling,
    Surface,
    Gadgets,
    Reduction,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Exactness,
        Suite::Backends,
        Suite::Robustness,
        Suite::Accounting,
        Suite::Budget,
        Suite::Mcmc,
        Suite::Sensitivity,
        Suite::GroundSampling,
        Suite::Surface,
        Suite::Gadgets,
        Suite::Reduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exactness => "exactness",
            Suite::Backends => "backends",
            Suite::Robustness => "robustness",
            Suite::Accounting => "accounting",
            Suite::Budget => "budget",
            Suite::Mcmc => "mcmc",
            Suite::Sensitivity => "sensitivity",
            Suite::GroundSampling => "ground-sampling",
            Suite::Surface => "surface",
            Suite::Gadgets => "gadgets",
            Suite::Reduction => "reduction",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown suite `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// `Full` runs the instance counts and sample sizes of the acceptance
/// criteria; `Quick` shrinks them for smoke runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub scale: Scale,
    /// Uniform per-gate perturbation for the robustness suite; `None` draws
    /// random plans.
    pub eps: Option<f64>,
    pub theta_weights: ThetaWeights,
    pub gamma_weights: GammaWeights,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            scale: Scale::Full,
            eps: None,
            theta_weights: ThetaWeights::default(),
            gamma_weights: GammaWeights::default(),
        }
    }
}

impl VerifyConfig {
    fn pick(&self, quick: usize, full: usize) -> usize {
        match self.scale {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }

    fn rng(&self, suite: Suite) -> SeededRng {
        crate::rng::stream(self.seed, suite as u64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passes(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Runs one suite. Errors raised while building or evaluating instances are
/// reported as a failed check rather than propagated.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let start = Instant::now();
    let mut checks = Checks::default();
    let outcome = match suite {
        Suite::Exactness => exactness(cfg, &mut checks),
        Suite::Backends => backends(cfg, &mut checks),
        Suite::Robustness => robustness(cfg, &mut checks),
        Suite::Accounting => accounting(cfg, &mut checks),
        Suite::Budget => budget(cfg, &mut checks),
        Suite::Mcmc => mcmc(cfg, &mut checks),
        Suite::Sensitivity => sensitivity_bounds(cfg, &mut checks),
        Suite::GroundSampling => ground_sampling(cfg, &mut checks),
        Suite::Surface => surface(cfg, &mut checks),
        Suite::Gadgets => gadgets(cfg, &mut checks),
        Suite::Reduction => reduction(cfg, &mut checks),
    };
    if let Err(e) = outcome {
        checks.push("suite completed without error", false, e.to_string());
    }
    SuiteReport {
        suite,
        checks: checks.0,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, cfg)).collect()
}

fn corpus_circuit(i: usize, rng: &mut SeededRng) -> Circuit {
    let n = 2 + i % 7;
    let m = rng.random_range(1..=20);
    if i % 2 == 1 {
        random_adaptive_circuit(n, m, 2, rng)
    } else {
        random_circuit(n, m, 2, rng)
    }
}

fn exactness(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let mut rng = cfg.rng(Suite::Exactness);
    let count = cfg.pick(24, 200);
    let presets = [
        ("default", SamplerOptions::default()),
        ("plain", SamplerOptions::plain()),
        ("robust", SamplerOptions::robust()),
    ];
    let mut worst = [0.0f64; 3];
    let mut adaptive = 0;
    let mut max_n = 0;
    for i in 0..count {
        let c = corpus_circuit(i, &mut rng);
        adaptive += c.is_adaptive() as usize;
        max_n = max_n.max(c.num_qubits());
        let reference = reference_distribution(&c)?;
        let mut o = StatevectorOracle::new(&c)?;
        for (w, (_, opts)) in worst.iter_mut().zip(&presets) {
            let d = induced_sampler_distribution(&c, &mut o, opts)?;
            *w = w.max(tv_distance(&d, &reference).l1);
        }
    }
    out.push(
        "corpus size",
        count >= cfg.pick(1, 200) && adaptive > 0,
        format!("{count} circuits, {adaptive} adaptive, n <= {max_n}, m <= 20, arity <= 2"),
    );
    for ((name, _), w) in presets.iter().zip(worst) {
        out.push(
            format!("induced law = reference ({name} options)"),
            w <= EXACT_TOL,
            format!("max L1 {w:.3e} (tol {EXACT_TOL:.0e})"),
        );
    }
    Ok(())
}

fn max_amplitude_diff(a: &mut dyn AmplitudeOracle, b: &mut dyn AmplitudeOracle) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in 0..=a.num_gates() {
        for x in BitString::iter_all(a.num_qubits()) {
            worst = worst.max((a.amplitude(t, x)? - b.amplitude(t, x)?).norm());
        }
    }
    Ok(worst)
}

/// `U_m ⋯ U_1` as dense `2^n × 2^n` matrices multiplied one gate at a time.
#[allow(clippy::needless_range_loop)]
fn dense_unitary(c: &Circuit) -> Vec<Vec<Complex64>> {
    let n = c.num_qubits();
    let dim = 1usize << n;
    let zero = Complex64::new(0.0, 0.0);
    let mut acc: Vec<Vec<Complex64>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|k| {
                    if r == k {
                        Complex64::new(1.0, 0.0)
                    } else {
                        zero
                    }
                })
                .collect()
        })
        .collect();
    for g in c.gates() {
        let mut full = vec![vec![zero; dim]; dim];
        for col in 0..dim {
            let x = BitString::from_index(col, n);
            let v = x.restrict(g.support()) as usize;
            for r in 0..g.dim() {
                let y = x.with_restriction(g.support(), r as u64).index();
                full[y][col] = g.entry(r, v);
            }
        }
        acc = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| (0..dim).map(|k| full[i][k] * acc[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    acc
}

fn backends(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let mut rng = cfg.rng(Suite::Backends);
    let count = cfg.pick(24, 200);
    let mut worst = 0.0f64;
    for i in 0..count {
        let c = corpus_circuit(i, &mut rng);
        let mut sv = StatevectorOracle::new(&c)?;
        let mut ps = PathSumOracle::new(&c);
        worst = worst.max(max_amplitude_diff(&mut sv, &mut ps)?);
    }
    out.push(
        "statevector = pathsum on every prefix amplitude",
        worst <= EXACT_TOL,
        format!("{count} circuits, max |Δ| {worst:.3e}"),
    );

    let count = cfg.pick(12, 60);
    let mut worst = 0.0f64;
    for i in 0..count {
        let n = 2 + i % 5;
        let t = i % 7;
        let c = random_clifford_t_circuit(n, rng.random_range(t.max(1)..=20), t, &mut rng);
        let mut sv = StatevectorOracle::new(&c)?;
        let mut sd = StabDecompOracle::new(&c)?;
        worst = worst.max(max_amplitude_diff(&mut sv, &mut sd)?);
    }
    out.push(
        "statevector = stabdecomp on Clifford+T circuits",
        worst <= EXACT_TOL,
        format!("{count} circuits, T-count <= 6, max |Δ| {worst:.3e}"),
    );

    let count = cfg.pick(20, 100);
    let mut worst = 0.0f64;
    for i in 0..count {
        let n = 1 + i % 4;
        let c = random_clifford_circuit(n, rng.random_range(1..=20), &mut rng);
        let u = dense_unitary(&c);
        let mut sd = StabDecompOracle::new(&c)?;
        let mut sv = StatevectorOracle::new(&c)?;
        for x in BitString::iter_all(n) {
            let want = u[x.index()][0];
            worst = worst.max((sd.amplitude(c.len(), x)? - want).norm());
            worst = worst.max((sv.amplitude(c.len(), x)? - want).norm());
        }
    }
    out.push(
        "Clifford amplitudes with global phase = dense matrix product",
        worst <= EXACT_TOL,
        format!("{count} circuits, n <= 4, max |Δ| {worst:.3e}"),
    );
    Ok(())
}

fn robustness(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let mut rng = cfg.rng(Suite::Robustness);
    let count = cfg.pick(12, 60);
    let mut violations = 0;
    let mut worst_ratio = 0.0f64;
    let mut sums = (f64::INFINITY, 0.0f64);
    let mut measured = Vec::with_capacity(count);
    for i in 0..count {
        let n = 2 + i % 5;
        let m = rng.random_range(2..=12);
        let c = if i % 3 == 2 {
            random_adaptive_circuit(n, m, 2, &mut rng)
        } else {
            random_circuit(n, m, 2, &mut rng)
        };
        let eps = match cfg.eps {
            Some(e) => vec![e; m],
            None => {
                let target = 10f64.powf(rng.random_range(-4.0..(0.05f64).log10()));
                let w: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
                let total: f64 = w.iter().sum();
                w.iter().map(|x| x * target / total).collect()
            }
        };
        let sum: f64 = eps.iter().sum();
        sums = (sums.0.min(sum), sums.1.max(sum));
        let plan = NoisePlan::new(eps, rng.random())?;
        let bound = plan.l1_bound();
        let mut noisy = NoisyOracle::new(Box::new(StatevectorOracle::new(&c)?), plan)?;
        let d = induced_sampler_distribution(&c, &mut noisy, &SamplerOptions::robust())?;
        let l1 = tv_distance(&d, &reference_distribution(&c)?).l1;
        measured.push((l1, bound));
        if l1 > bound {
            violations += 1;
        }
        if bound > 0.0 {
            worst_ratio = worst_ratio.max(l1 / bound);
        }
    }
    let in_range = cfg.eps.is_some() || (sums.0 >= 1e-4 && sums.1 <= 0.05);
    out.push(
        "plan corpus",
        count >= cfg.pick(1, 50) && in_range,
        format!("{count} pairs, sum eps in [{:.3e}, {:.3e}]", sums.0, sums.1),
    );
    let (l1_max, bound_at) =
        measured
            .iter()
            .copied()
            .fold((0.0, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc });
    out.push(
        "L1(noisy induced, P_m) <= 16 * sum_{t<m} eps_t",
        violations == 0,
        format!(
            "{violations} violations, max L1 {l1_max:.3e} (bound there {bound_at:.3e}), max L1/bound {worst_ratio:.3}"
        ),
    );

    let c = random_circuit(4, 10, 2, &mut rng);
    let mut clean = NoisyOracle::new(
        Box::new(StatevectorOracle::new(&c)?),
        NoisePlan::zero(c.len()),
    )?;
    let d = induced_sampler_distribution(&c, &mut clean, &SamplerOptions::robust())?;
    let l1 = tv_distance(&d, &reference_distribution(&c)?).l1;
    out.push(
        "zero-noise plan is exact",
        l1 <= EXACT_TOL,
        format!("L1 {l1:.3e}"),
    );
    Ok(())
}

fn accounting(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let mut rng = cfg.rng(Suite::Accounting);
    let count = cfg.pick(30, 200);
    let presets = [
        SamplerOptions::default(),
        SamplerOptions::plain(),
        SamplerOptions::robust(),
    ];
    let mut bound_violations = 0;
    let mut counter_mismatch = 0;
    let mut diagonal_gates = 0;
    let mut diagonal_evaluations = 0;
    let mut traces = 0;
    for i in 0..count {
        let n = 2 + i % 7;
        let m = rng.random_range(1..=20);
        let c = if i % 2 == 1 {
            random_adaptive_circuit(n, m, 3.min(n - 1), &mut rng)
        } else {
            random_circuit(n, m, 3.min(n), &mut rng)
        };
        let limit = c.len() << c.max_arity();
        for opts in &presets {
            let mut o = StatevectorOracle::new(&c)?;
            let t = gate_by_gate_sample(&c, &mut o, opts, &mut rng)?;
            traces += 1;
            bound_violations += (t.evaluations() > limit) as usize;
            counter_mismatch += (o.calls().total() as usize != t.evaluations()) as usize;
            if opts.skip_diagonal && !c.is_adaptive() {
                for (g, step) in c.gates().iter().zip(&t.steps) {
                    if g.class() == GateClass::Diagonal {
                        diagonal_gates += 1;
                        if *step != StepAction::DiagonalSkip {
                            diagonal_evaluations += 1;
                        }
                    }
                }
            }
        }
    }
    out.push(
        "evaluations <= m * 2^k",
        bound_violations == 0,
        format!("{traces} traces, {bound_violations} violations"),
    );
    out.push(
        "oracle call counter = trace evaluations",
        counter_mismatch == 0,
        format!("{counter_mismatch} mismatches"),
    );
    out.push(
        "diagonal gates incur zero evaluations",
        diagonal_evaluations == 0 && diagonal_gates > 0,
        format!("{diagonal_gates} diagonal gates, {diagonal_evaluations} evaluated"),
    );

    let count = cfg.pick(30, 200);
    let mut violations = 0;
    let mut max_used = 0usize;
    for i in 0..count {
        let c = random_cnot_su2_circuit(2 + i % 7, rng.random_range(1..=30), &mut rng);
        let single = c
            .gates()
            .iter()
            .filter(|g| g.arity() == 1 && g.class() == GateClass::General)
            .count();
        let mut o = StatevectorOracle::new(&c)?;
        let t = gate_by_gate_sample(&c, &mut o, &SamplerOptions::default(), &mut rng)?;
        violations += (t.evaluations() > 2 * single) as usize;
        max_used = max_used.max(t.evaluations());
    }
    out.push(
        "CNOT+SU(2): evaluations <= 2 * #single-qubit non-diagonal gates",
        violations == 0,
        format!("{count} circuits, {violations} violations, max evaluations {max_used}"),
    );
    Ok(())
}

fn budget(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let mut rng = cfg.rng(Suite::Budget);
    let mut worst_sum = 0.0f64;
    let mut worst_gain = 0.0f64;
    let vectors = 20;
    for _ in 0..vectors {
        let m = rng.random_range(3..30);
        let xi: Vec<f64> = (0..m)
            .map(|_| {
                if rng.random_bool(0.5) {
                    1.0
                } else {
                    rng.random_range(1.0..1.5)
                }
            })
            .collect();
        let b = allocate_error_budget(&xi, rng.random_range(0.01..1.0))?;
        worst_sum = worst_sum.max((b.eps_sum() - b.delta / 16.0).abs());
        for i in 0..b.eps.len() {
            for j in 0..b.eps.len() {
                if i == j {
                    continue;
                }
                for s in [0.01, -0.01, 1e-4, -1e-4] {
                    let mut e = b.eps.clone();
                    let d = e[i] * s;
                    e[i] += d;
                    e[j] -= d;
                    worst_gain = worst_gain.max((b.cost - b.cost_of(&e)) / b.cost);
                }
            }
        }
    }
    out.push(
        "sum eps_t = delta / 16",
        worst_sum <= BUDGET_SUM_TOL,
        format!("{vectors} xi vectors, max deviation {worst_sum:.3e}"),
    );
    out.push(
        "no budget-preserving perturbation lowers the cost",
        worst_gain <= 1e-12,
        format!("{vectors} xi vectors, max relative improvement {worst_gain:.3e}"),
    );

    let mut cliffords: Vec<Gate> = vec![
        Gate::h(0),
        Gate::s(0),
        Gate::sdg(0),
        Gate::x(0),
        Gate::y(0),
        Gate::z(0),
        Gate::cnot(0, 1),
        Gate::cz(0, 1),
    ];
    cliffords.extend((0..50).map(|_| random_clifford_gate(3, &mut rng)));
    let mut non_unit = Vec::new();
    for g in &cliffords {
        let xi = gate_xi(g)?;
        if xi != 1.0 {
            non_unit.push(format!("{}: {xi}", g.label()));
        }
    }
    out.push(
        "xi = 1 for Clifford gates",
        non_unit.is_empty(),
        if non_unit.is_empty() {
            format!("{} gates", cliffords.len())
        } else {
            non_unit.join(", ")
        },
    );
    let zero = (xi_rz(0.0)?, gate_xi(&Gate::rz(0, 0.0))?);
    out.push(
        "xi = 1 for theta = 0 rotations",
        zero.0 == 1.0 && zero.1 == 1.0,
        format!("xi_rz(0) = {}, xi(Rz(0)) = {}", zero.0, zero.1),
    );
    Ok(())
}

fn argmax(p: &[f64]) -> usize {
    p.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn mcmc(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let mut rng = cfg.rng(Suite::Mcmc);
    let target = cfg.pick(12, 100);
    let steps = 200;
    let (mut checked, mut skipped) = (0usize, 0usize);
    let mut worst_db = 0.0f64;
    let mut min_eig = f64::INFINITY;
    let mut gap_violations = 0;
    let mut worst_gap_margin = f64::INFINITY;
    let mut tv_violations = 0;
    let mut l1_violations = 0;
    let mut worst_tv_excess = f64::NEG_INFINITY;
    let mut kinds = [0usize; 2];
    while checked < target {
        if skipped > 10 * target {
            return Err(Error::InvalidArgument(format!(
                "only {checked} of {target} random instances had a unique ground state"
            )));
        }
        let n = 3 + checked % 6;
        let stoquastic = checked % 2 == 0;
        let h = if stoquastic {
            random_stoquastic(n, &mut rng)?
        } else {
            random_k_local(n, 2, 2 * n, &mut rng)?
        };
        let g = match exact_ground_state(&h) {
            Ok(g) => g,
            Err(Error::DegenerateGroundState { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let oracle = ExactOracle::from_state(n, &g.psi);
        let x_in = BitString::from_index(argmax(oracle.probabilities()), n);
        let chain = ChainConfig::new(x_in, 2, 0, 0);
        let r = gap_bound_check(&h, &chain)?;
        worst_db = worst_db.max(r.detailed_balance_residual);
        min_eig = min_eig.min(r.min_eigenvalue);
        gap_violations += (!r.gap_bound_holds) as usize;
        worst_gap_margin = worst_gap_margin.min(1.0 - r.lambda1 - r.gap_lower_bound);
        let cm = chain_matrix(&oracle, &oracle.support(), &chain)?;
        let d = tv_decay(&cm, x_in, steps)?;
        tv_violations += (d.tv_violations > 0) as usize;
        l1_violations += (d.l1_violations > 0) as usize;
        worst_tv_excess = worst_tv_excess.max(d.worst_tv_excess);
        kinds[!stoquastic as usize] += 1;
        checked += 1;
    }
    out.push(
        "instance corpus",
        checked >= cfg.pick(1, 100),
        format!(
            "{checked} instances (n 3..8, k = 2; {} stoquastic, {} general 2-local), {skipped} degenerate skipped",
            kinds[0], kinds[1]
        ),
    );
    out.push(
        "detailed balance",
        worst_db <= DETAILED_BALANCE_TOL,
        format!("max residual {worst_db:.3e}"),
    );
    out.push(
        "chain eigenvalues nonnegative",
        min_eig >= -NEGATIVE_EIGENVALUE_TOL,
        format!("min eigenvalue {min_eig:.3e}"),
    );
    out.push(
        "1 - lambda_1 >= gamma / (2 N s)",
        gap_violations == 0,
        format!("{gap_violations} violations, min margin {worst_gap_margin:.3e}"),
    );
    out.push(
        format!("TV(P^t(x_in, .), pi) <= lambda_1^t / (2 sqrt(pi(x_in))) for t <= {steps}"),
        tv_violations == 0,
        format!(
            "{tv_violations} instances violate, max excess {worst_tv_excess:.3e}; L1 form violated on {l1_violations}"
        ),
    );
    Ok(())
}

fn sensitivity_bounds(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let mut rng = cfg.rng(Suite::Sensitivity);
    let count = cfg.pick(12, 50);
    let (mut violations, mut non_stoquastic, mut checked) = (0, 0, 0);
    let mut worst_margin = f64::INFINITY;
    while checked < count {
        let n = 2 + checked % 7;
        let h = random_stoquastic(n, &mut rng)?;
        let rep = stoquastic_check_and_bound(&h)?;
        let g = match exact_ground_state(&h) {
            Ok(g) => g,
            Err(Error::DegenerateGroundState { .. }) => continue,
            Err(e) => return Err(e),
        };
        let s = sensitivity(&h, &g.psi)?;
        non_stoquastic += (!rep.is_stoquastic) as usize;
        violations += (s > rep.bound + EXACT_TOL) as usize;
        worst_margin = worst_margin.min(rep.bound - s);
        checked += 1;
    }
    out.push(
        "stoquastic: s <= max diag - E0",
        violations == 0 && non_stoquastic == 0,
        format!("{checked} instances, {violations} violations, min margin {worst_margin:.3e}"),
    );

    let count = cfg.pick(8, 40);
    let mut failures = Vec::new();
    let mut worst_ratio = 0.0f64;
    let mut s_over_m = 0.0f64;
    for i in 0..count {
        let n = 2 + i % 5;
        let families = 2 + i % 3;
        let (hm, _) = if i % 4 == 3 {
            random_magic_zero_support(n.max(3), families, &mut rng)?
        } else {
            random_magic(n, families, &mut rng)?
        };
        let rep = verify_magic_ratio_structure(&hm)?;
        worst_ratio = worst_ratio.max(rep.max_ratio_error);
        s_over_m = s_over_m.max(rep.s / rep.m as f64);
        if !rep.s_le_m {
            failures.push(format!("instance {i}: s = {} > m = {}", rep.s, rep.m));
        }
        if !rep.passes() {
            failures.push(format!("instance {i}: structure {rep:?}"));
        }
    }
    out.push(
        "magic-ratio: s <= m",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{count} instances, max s/m {s_over_m:.3}")
        } else {
            failures.join("; ")
        },
    );
    out.push(
        "magic-ratio ratios = eigensolve ratios",
        worst_ratio <= RATIO_TOL,
        format!("max error {worst_ratio:.3e}"),
    );
    Ok(())
}

fn ground_sampling(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let h: SparseHamiltonian = tfim(2, 1.0)?;
    let g = exact_ground_state(&h)?;
    let oracle = ExactOracle::from_state(2, &g.psi);
    let exact = Distribution::from_dense(2, oracle.probabilities());
    let chains = cfg.pick(2_000, 10_000);
    let steps = cfg.pick(2_000, 10_000) as u64;
    let tol = match cfg.scale {
        Scale::Quick => 2.0 * GROUND_TV_TOL,
        Scale::Full => GROUND_TV_TOL,
    };
    let chain = ChainConfig::new(BitString::zeros(2), 2, steps, cfg.seed);
    let (finals, stats) = run_chains(&oracle, &chain, chains)?;
    let empirical = Distribution::from_samples(2, &finals);
    let tv = tv_distance(&empirical, &exact).tv;
    out.push(
        format!("2-qubit TFIM: TV(empirical, |psi|^2) <= {tol}"),
        tv <= tol,
        format!(
            "{chains} chains x {steps} steps, TV {tv:.4}, acceptance {:.3}",
            stats.accepted as f64 / stats.steps.max(1) as f64
        ),
    );
    Ok(())
}

/// Wheel with four spokes: 5 vertices, 8 edges, cycle space dimension 4.
fn wheel4() -> Result<PlanarGraph> {
    let mut edges: Vec<Edge> = (1..=4).map(|i| Edge::new(0, i)).collect();
    edges.extend((1..=4).map(|i| Edge::new(i, i % 4 + 1)));
    PlanarGraph::new(5, edges)
}

fn surface(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let mut rng = cfg.rng(Suite::Surface);
    let graphs = vec![
        polygon(3),
        polygon(4),
        polygon(6),
        grid(2, 3)?,
        grid(2, 4)?,
        grid(3, 3)?,
        grid(3, 4)?,
        wheel4()?,
    ];
    let draws = cfg.pick(2_000, 20_000);
    let mut bad = 0;
    for g in &graphs {
        for _ in 0..draws {
            bad += (!g.is_cycle(g.sample_cycle(&mut rng).bits())) as usize;
        }
    }
    out.push(
        "sample_cycle outputs are cycles",
        bad == 0,
        format!("{} graphs x {draws} draws, {bad} non-cycles", graphs.len()),
    );

    let two_squares = grid(2, 3)?;
    let draws = cfg.pick(20_000, 100_000);
    let samples: Vec<BitString> = (0..draws)
        .map(|_| two_squares.sample_cycle(&mut rng))
        .collect();
    let mut uniform = Distribution::new(two_squares.num_edges());
    let cycles = two_squares.num_cycles();
    two_squares.for_each_cycle(16, |x| {
        uniform.add(
            BitString::from_bits(x, two_squares.num_edges()),
            1.0 / cycles as f64,
        )
    })?;
    let gof = chi_square_gof(&samples, &uniform)?;
    out.push(
        "uniform cycle sampling on the two-square graph (chi-square)",
        gof.passes(CHI_SQUARE_ALPHA),
        format!(
            "{draws} draws over {cycles} cycles, statistic {:.3}, p = {:.4} (alpha {CHI_SQUARE_ALPHA})",
            gof.statistic, gof.p_value
        ),
    );

    let exact_graphs: Vec<PlanarGraph> = graphs
        .iter()
        .filter(|g| {
            g.cycle_space_dim() <= 4 && g.num_edges() <= crate::surface::MBQC_EXACT_MAX_EDGES
        })
        .cloned()
        .collect();
    let per_graph = cfg.pick(2, 8);
    let mut worst = 0.0f64;
    let mut instances = 0;
    let mut outside = 0;
    for g in &exact_graphs {
        for j in 0..per_graph {
            let sched = random_schedule(g.num_edges(), j % 2 == 1, &mut rng);
            let inst = SurfaceCodeInstance::new(g.clone(), sched)?;
            let induced = inst.induced_distribution()?;
            let reference = inst.reference_distribution()?;
            worst = worst.max(tv_distance(&induced, &reference).l1);
            for _ in 0..20 {
                outside += (reference.get(mbqc_sample(&inst, &mut rng)?) <= 0.0) as usize;
            }
            instances += 1;
        }
    }
    let max_dim = exact_graphs
        .iter()
        .map(|g| g.cycle_space_dim())
        .max()
        .unwrap_or(0);
    out.push(
        "MBQC induced law = brute force",
        worst <= MBQC_TOL && max_dim == 4,
        format!(
            "{instances} schedules on {} graphs (cycle dim <= {max_dim}), max L1 {worst:.3e}",
            exact_graphs.len()
        ),
    );
    out.push(
        "MBQC samples lie in the brute-force support",
        outside == 0,
        format!("{} samples, {outside} outside", instances * 20),
    );
    Ok(())
}

fn gadgets(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let r = verify_gadgets_with(cfg.theta_weights, cfg.gamma_weights)?;
    for (name, ok) in r.checks() {
        let detail = match name {
            n if n.starts_with("theta: Cycle") => {
                format!("|Cycle(000)| = {:.3e}", r.theta_000.norm())
            }
            n if n.starts_with("theta: |Cycle") => format!("{:?}", r.theta_weight_two),
            n if n.starts_with("gamma: Cycle") => format!(
                "|Cycle(1100)| = {:.3e}, |Cycle(0110)| = {:.3e}",
                r.condition2[0].norm(),
                r.condition2[1].norm()
            ),
            n if n.starts_with("gamma: |Cycle") => format!("{:?}", r.condition1),
            "gamma: symmetries" => format!("max error {:.3e}", r.symmetry_error),
            "gamma: closed-form polynomials" => format!("max error {:.3e}", r.polynomial_error),
            _ => r
                .crossing_table
                .iter()
                .map(|(z, v)| format!("{z}:{v:.6}"))
                .collect::<Vec<_>>()
                .join(" "),
        };
        out.push(name, ok, detail);
    }
    out.push(
        format!("tau = {TAU_TARGET} +- {TAU_TOL:.0e}"),
        (r.tau - TAU_TARGET).abs() <= TAU_TOL,
        format!("tau = {:.6}", r.tau),
    );
    Ok(())
}

fn reduction(cfg: &VerifyConfig, out: &mut Checks) -> Result<()> {
    let cases: [(&str, Drawing, u64); 3] = [
        ("K4", k4(), 3),
        ("K3,3 (one crossing)", k33_one_crossing(), 6),
        ("triple edge", triple_edge(), 3),
    ];
    for (name, d, want) in cases {
        match reduction_with(&d, cfg.theta_weights, cfg.gamma_weights) {
            Ok(r) => out.push(
                format!("PerfMatch({name}) = {want}"),
                r.count == want && r.brute_force == want && (r.value - want as f64).abs() <= 1e-6,
                format!(
                    "reduction {:.9} -> {}, brute force {}, {} expanded edges, cycle dim {}",
                    r.value, r.count, r.brute_force, r.expanded_edges, r.cycle_dim
                ),
            ),
            Err(e) => out.push(format!("PerfMatch({name}) = {want}"), false, e.to_string()),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn dense_unitary_of_bell_circuit() {
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1)]).unwrap();
        let u = dense_unitary(&c);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let col: Vec<f64> = (0..4).map(|i| u[i][0].re).collect();
        let eleven = BitString::from_bits(0b11, 2).index();
        for (i, v) in col.iter().enumerate() {
            let want = if i == 0 || i == eleven { r } else { 0.0 };
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn wheel_has_four_independent_cycles() {
        assert_eq!(wheel4().unwrap().cycle_space_dim(), 4);
    }

    #[test]
    fn quick_gadget_and_reduction_suites_pass() {
        let cfg = VerifyConfig {
            scale: Scale::Quick,
            ..VerifyConfig::default()
        };
        assert!(run_suite(Suite::Gadgets, &cfg).passes());
        assert!(run_suite(Suite::Reduction, &cfg).passes());
    }

    #[test]
    fn perturbed_gadget_weight_fails() {
        let mut cfg = VerifyConfig {
            scale: Scale::Quick,
            ..VerifyConfig::default()
        };
        cfg.gamma_weights.c += Complex64::new(0.01, 0.0);
        assert!(!run_suite(Suite::Gadgets, &cfg).passes());
    }
}
