use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use ampsample::backends::{AmplitudeOracle, Backend, NoisePlan, NoisyOracle};
use ampsample::circuit::{parse_circuit_file, Circuit};
use ampsample::ground::{
    exact_ground_state, gap_bound_check, run_chains, ChainConfig, ChainStats, ExactOracle,
    GroundStateOracle, MagicRatioHamiltonian, MagicRatioOracle, SparseHamiltonian,
    GAP_CHECK_MAX_QUBITS,
};
use ampsample::rng;
use ampsample::samplers::{
    allocate_error_budget, circuit_xi, qubit_by_qubit_sample, reference_distribution, sample_shots,
    tv_distance, Distribution, SamplerOptions,
};
use ampsample::surface::{mbqc_sample, PlanarGraph, SurfaceCodeInstance};
use ampsample::verify::{run_suite, Scale, Suite, VerifyConfig};
use ampsample::{BitString, Complex64, Error};

use crate::report::Report;
use crate::{
    Algorithm, BudgetArgs, Cli, Command, DistributionArgs, Global, Preset, SampleCircuitArgs,
    SampleGroundArgs, SampleMbqcArgs, VerifyArgs,
};

/// Largest `n` for which a default starting string is found by scanning.
const X_IN_SCAN_MAX_QUBITS: usize = 20;

#[derive(Debug)]
pub enum CliError {
    /// A library error, tagged with the input file it arose from.
    Input {
        path: PathBuf,
        source: Error,
    },
    Lib(Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input {
                path,
                source: Error::Parse { line, msg },
            } if *line > 0 => write!(f, "{}:{line}: {msg}", path.display()),
            CliError::Input {
                path,
                source: Error::Parse { msg, .. },
            } => write!(f, "{}: {msg}", path.display()),
            CliError::Input { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn load<T>(path: &Path, parse: impl FnOnce(&Path) -> ampsample::Result<T>) -> CliResult<T> {
    parse(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

/// Returns whether the command's own checks passed (only `verify` can fail
/// without an error).
pub fn run(cli: &Cli) -> CliResult<bool> {
    let g = &cli.global;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = g.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    let (report, ok) = pool.install(|| -> CliResult<(Report, bool)> {
        Ok(match &cli.command {
            Command::SampleCircuit(a) => (sample_circuit(g, a)?, true),
            Command::SampleGround(a) => (sample_ground(g, a)?, true),
            Command::SampleMbqc(a) => (sample_mbqc(g, a)?, true),
            Command::Budget(a) => (budget(a)?, true),
            Command::Verify(a) => verify(g, a)?,
            Command::Distribution(a) => (distribution(a)?, true),
        })
    })?;
    let text = if g.json {
        report.to_json()
    } else {
        report.to_text()
    };
    match &g.output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input {
            path: p.clone(),
            source: e.into(),
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(CliError::Usage(format!("cannot write to stdout: {e}")))
                }
                _ => {}
            }
        }
    }
    Ok(ok)
}

fn build_backend(g: &Global, backend: Backend, c: &Circuit) -> CliResult<Box<dyn AmplitudeOracle>> {
    if g.force {
        eprintln!("warning: --force lifts the qubit guard of the {backend} backend");
        Ok(backend.build_unguarded(c)?)
    } else {
        Ok(backend.build(c)?)
    }
}

fn sample_circuit(g: &Global, a: &SampleCircuitArgs) -> CliResult<Report> {
    let c = load(&a.circuit, parse_circuit_file)?;
    let backend = Backend::from(a.backend);
    let mut oracle = build_backend(g, backend, &c)?;
    if let Some(path) = &a.noise {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
            path: path.clone(),
            source: e.into(),
        })?;
        let plan = load(path, |_| NoisePlan::from_text(&text, c.len()))?;
        oracle = Box::new(NoisyOracle::new(oracle, plan)?);
    }
    let (m, k) = (c.len(), c.max_arity());
    let mut r = Report::new("sample-circuit", &["shot", "bits"]);
    r.meta("circuit", a.circuit.display().to_string())
        .meta("n", c.num_qubits())
        .meta("m", m)
        .meta("k", k)
        .meta("backend", backend.name())
        .meta("seed", g.seed)
        .meta("shots", a.shots)
        .meta("noise", a.noise.as_ref().map(|p| p.display().to_string()));
    match a.algorithm {
        Algorithm::Gate => {
            let opts = match a.options {
                Preset::Default => SamplerOptions::default(),
                Preset::Plain => SamplerOptions::plain(),
                Preset::Robust => SamplerOptions::robust(),
            };
            let traces = sample_shots(&c, oracle.as_ref(), &opts, a.shots, g.seed)?;
            let evals: Vec<usize> = traces.iter().map(|t| t.evaluations()).collect();
            let bound = m << k;
            r.meta("algorithm", "gate")
                .meta("options", format!("{:?}", a.options).to_lowercase())
                .meta("evaluations_total", evals.iter().sum::<usize>())
                .meta(
                    "evaluations_max_per_shot",
                    evals.iter().copied().max().unwrap_or(0),
                )
                .meta("evaluation_bound_m_2k", bound)
                .meta("within_bound", evals.iter().all(|&e| e <= bound))
                .meta(
                    "diagonal_skips",
                    traces.iter().map(|t| t.diagonal_skips()).sum::<usize>(),
                )
                .meta(
                    "permutation_shortcuts",
                    traces.iter().map(|t| t.permutations()).sum::<usize>(),
                );
            if a.trace {
                let mut per_gate = vec![0usize; m];
                for t in &traces {
                    for (acc, e) in per_gate.iter_mut().zip(t.per_gate_evaluations()) {
                        *acc += e;
                    }
                }
                r.meta("evaluations_per_gate", per_gate);
            }
            for (i, t) in traces.iter().enumerate() {
                r.row(vec![json!(i), json!(t.output.to_string())]);
            }
        }
        Algorithm::Qubit => {
            if !oracle.supports_marginals() {
                return Err(Error::MarginalsUnsupported(oracle.backend()).into());
            }
            let shots: Vec<(BitString, u64)> = (0..a.shots)
                .into_par_iter()
                .map_init(
                    || oracle.clone_box(),
                    |o, i| {
                        let mut rng = rng::stream(g.seed, i as u64);
                        o.reset_calls();
                        let x = qubit_by_qubit_sample(&c, o.as_mut(), &mut rng)?;
                        Ok((x, o.calls().total_marginal()))
                    },
                )
                .collect::<ampsample::Result<_>>()?;
            r.meta("algorithm", "qubit").meta(
                "marginal_evaluations_total",
                shots.iter().map(|s| s.1).sum::<u64>(),
            );
            for (i, (x, _)) in shots.iter().enumerate() {
                r.row(vec![json!(i), json!(x.to_string())]);
            }
        }
    }
    Ok(r)
}

enum GroundInput {
    Sparse(SparseHamiltonian),
    Magic(MagicRatioHamiltonian),
}

fn magic_locality(hm: &MagicRatioHamiltonian) -> usize {
    let mut k = 0;
    for fam in hm.families() {
        for phi in fam {
            for &x in phi.keys() {
                for &y in phi.keys() {
                    k = k.max((x ^ y).count_ones() as usize);
                }
            }
        }
    }
    k.max(1)
}

fn sample_ground(g: &Global, a: &SampleGroundArgs) -> CliResult<Report> {
    let input = if a.magic {
        GroundInput::Magic(load(&a.hamiltonian, MagicRatioHamiltonian::parse_file)?)
    } else {
        GroundInput::Sparse(load(&a.hamiltonian, SparseHamiltonian::parse_file)?)
    };
    let in_file = |e: Error| CliError::Input {
        path: a.hamiltonian.clone(),
        source: e,
    };
    let (n, locality, sparse) = match &input {
        GroundInput::Sparse(h) => (h.num_qubits(), h.locality(), Some(h.clone())),
        GroundInput::Magic(hm) => {
            let n = hm.num_qubits();
            let small = n <= GAP_CHECK_MAX_QUBITS;
            let sparse = if small {
                Some(hm.to_sparse().map_err(in_file)?)
            } else {
                None
            };
            (n, magic_locality(hm), sparse)
        }
    };
    let exact = sparse
        .as_ref()
        .map(|h| exact_ground_state(h).map_err(in_file))
        .transpose()?;
    let oracle: Box<dyn GroundStateOracle> = match &input {
        GroundInput::Sparse(_) => {
            let psi = &exact.as_ref().expect("sparse input is diagonalized").psi;
            Box::new(ExactOracle::from_state(n, psi))
        }
        GroundInput::Magic(hm) => Box::new(MagicRatioOracle::new(hm.clone())),
    };
    let x_in = match &a.x_in {
        Some(s) => {
            let x: BitString = s.parse()?;
            if x.len() != n {
                return Err(CliError::Usage(format!("--x-in must have {n} bits")));
            }
            x
        }
        None => default_start(
            n,
            exact.as_ref().map(|e| e.probabilities()),
            oracle.as_ref(),
        )?,
    };
    if !oracle.in_support(x_in)? {
        return Err(Error::OutsideSupport(x_in.to_string()).into());
    }
    let k = a.k.unwrap_or(locality);
    let mut cfg = ChainConfig::new(x_in, k, a.steps, g.seed);
    cfg.epsilon = a.epsilon;

    let (finals, stats): (Vec<BitString>, ChainStats) =
        run_chains(oracle.as_ref(), &cfg, a.chains)?;
    let mut r = Report::new("sample-ground", &["chain", "bits"]);
    r.meta("input", a.hamiltonian.display().to_string())
        .meta("kind", if a.magic { "magic-ratio" } else { "sparse" })
        .meta("n", n)
        .meta("k", k)
        .meta("x_in", x_in.to_string())
        .meta("chains", a.chains)
        .meta("steps", a.steps)
        .meta("seed", g.seed)
        .meta("proposal_count_N", cfg.proposal_count().to_string())
        .meta("accepted", stats.accepted)
        .meta("rejected", stats.rejected)
        .meta("outside_support", stats.outside_support)
        .meta("held", stats.held)
        .meta("self_proposals", stats.self_proposals)
        .meta("ratio_calls", stats.ratio_calls());
    if let (Some(h), true) = (&sparse, n <= GAP_CHECK_MAX_QUBITS) {
        let check = gap_bound_check(h, &cfg).map_err(in_file)?;
        r.meta("e0", check.e0)
            .meta("gamma", check.gamma)
            .meta("s", check.s)
            .meta("lambda1", check.lambda1)
            .meta("gap_lower_bound", check.gap_lower_bound)
            .meta("gap_bound_holds", check.gap_bound_holds)
            .meta("pi_x_in", check.pi_x_in)
            .meta("mixing_time", check.mixing_time)
            .meta("runtime_estimate", check.runtime_estimate);
        if let Some(e) = &exact {
            let target = Distribution::from_dense(n, &e.probabilities());
            let empirical = Distribution::from_samples(n, &finals);
            r.meta("empirical_tv", tv_distance(&empirical, &target).tv);
        }
    }
    for (i, x) in finals.iter().enumerate() {
        r.row(vec![json!(i), json!(x.to_string())]);
    }
    Ok(r)
}

fn default_start(
    n: usize,
    probabilities: Option<Vec<f64>>,
    oracle: &dyn GroundStateOracle,
) -> CliResult<BitString> {
    if let Some(p) = probabilities {
        let best = p
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Ok(BitString::from_index(best, n));
    }
    if n <= X_IN_SCAN_MAX_QUBITS {
        for x in BitString::iter_all(n) {
            if oracle.in_support(x)? {
                return Ok(x);
            }
        }
    }
    Err(CliError::Usage(
        "no starting string found; pass --x-in".into(),
    ))
}

fn sample_mbqc(g: &Global, a: &SampleMbqcArgs) -> CliResult<Report> {
    let graph = load(&a.graph, PlanarGraph::parse_file)?;
    let inst = match &a.schedule {
        Some(p) => {
            let sched = load(p, parse_circuit_file)?;
            SurfaceCodeInstance::new(graph, sched).map_err(|source| CliError::Input {
                path: p.clone(),
                source,
            })?
        }
        None => SurfaceCodeInstance::identity(graph)?,
    };
    let records: Vec<BitString> = (0..a.shots)
        .into_par_iter()
        .map(|i| mbqc_sample(&inst, &mut rng::stream(g.seed, i as u64)))
        .collect::<ampsample::Result<_>>()?;
    let gr = inst.graph();
    let cycles = records.iter().filter(|x| gr.is_cycle(x.bits())).count();
    let mut r = Report::new("sample-mbqc", &["shot", "record"]);
    r.meta("graph", a.graph.display().to_string())
        .meta(
            "schedule",
            a.schedule.as_ref().map(|p| p.display().to_string()),
        )
        .meta("edges", gr.num_edges())
        .meta("vertices", gr.num_vertices())
        .meta("cycle_space_dim", gr.cycle_space_dim())
        .meta("seed", g.seed)
        .meta("shots", a.shots)
        .meta("cycle_records", cycles);
    for (i, x) in records.iter().enumerate() {
        r.row(vec![json!(i), json!(x.to_string())]);
    }
    Ok(r)
}

fn budget(a: &BudgetArgs) -> CliResult<Report> {
    let (source, xi) = match (&a.xi, &a.circuit) {
        (Some(xi), _) => ("explicit".to_string(), xi.clone()),
        (None, Some(p)) => {
            let c = load(p, parse_circuit_file)?;
            let xi = circuit_xi(&c).map_err(|source| CliError::Input {
                path: p.clone(),
                source,
            })?;
            (p.display().to_string(), xi)
        }
        (None, None) => return Err(CliError::Usage("pass a circuit or --xi".into())),
    };
    let b = allocate_error_budget(&xi, a.delta)?;
    let mut r = Report::new("budget", &["t", "xi", "eta", "eps"]);
    r.meta("source", source)
        .meta("m", xi.len())
        .meta("delta", b.delta)
        .meta("eps_sum", b.eps_sum())
        .meta("cost", b.cost)
        .meta("closed_form_cost", b.closed_form)
        .meta("last_term_cost", b.last_term);
    for (t, x) in b.xi.iter().enumerate() {
        r.row(vec![
            json!(t + 1),
            json!(x),
            b.eta.get(t).map_or(Value::Null, |v| json!(v)),
            b.eps.get(t).map_or(Value::Null, |v| json!(v)),
        ]);
    }
    Ok(r)
}

fn verify(g: &Global, a: &VerifyArgs) -> CliResult<(Report, bool)> {
    let suites: Vec<Suite> = if a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite
            .iter()
            .map(|s| s.parse())
            .collect::<ampsample::Result<_>>()?
    };
    let mut cfg = VerifyConfig {
        seed: g.seed,
        scale: if a.quick { Scale::Quick } else { Scale::Full },
        eps: a.eps,
        ..VerifyConfig::default()
    };
    if let Some(d) = a.perturb_gadget {
        cfg.gamma_weights.c += Complex64::new(d, 0.0);
    }
    let mut r = Report::new("verify", &["suite", "status", "check", "detail"]);
    r.meta("seed", g.seed)
        .meta("scale", if a.quick { "quick" } else { "full" })
        .meta("eps", a.eps);
    let mut all = true;
    for s in suites {
        let rep = run_suite(s, &cfg);
        all &= rep.passes();
        r.meta(
            format!("suite.{s}"),
            if rep.passes() { "pass" } else { "fail" },
        );
        for c in &rep.checks {
            let status = if c.passed { "pass" } else { "fail" };
            r.row(vec![
                json!(s.name()),
                json!(status),
                json!(c.name),
                json!(c.detail),
            ]);
        }
    }
    r.meta("all_pass", all);
    Ok((r, all))
}

fn distribution(a: &DistributionArgs) -> CliResult<Report> {
    let c = load(&a.circuit, parse_circuit_file)?;
    let d = reference_distribution(&c)?;
    let mut r = Report::new("distribution", &["bits", "probability"]);
    r.meta("circuit", a.circuit.display().to_string())
        .meta("n", c.num_qubits())
        .meta("m", c.len())
        .meta("support", d.support_len());
    for (x, p) in d.iter() {
        r.row(vec![json!(x.to_string()), json!(p)]);
    }
    Ok(r)
}
