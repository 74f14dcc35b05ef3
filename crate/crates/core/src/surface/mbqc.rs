use num_complex::Complex64;
use rand::Rng;

use super::overlap::{basis_qubit, product_state_overlap, Qubit};
use super::PlanarGraph;
use crate::bits::BitString;
use crate::circuit::random::haar_gate;
use crate::circuit::{Circuit, ControlTable, Gate};
use crate::error::{Error, Result};
use crate::samplers::{reference_distribution_from, Distribution};

pub const MBQC_EXACT_MAX_EDGES: usize = 10;
/// Two-point masses below this signal an inconsistent evaluation.
const PAIR_MASS_TOL: f64 = 1e-14;

/// Surface-code state on `graph` followed by single-qubit rules: position
/// `t` of `schedule` acts on edge `t` and may be classically controlled by
/// earlier outcomes.
#[derive(Clone, Debug)]
pub struct SurfaceCodeInstance {
    graph: PlanarGraph,
    schedule: Circuit,
}

impl SurfaceCodeInstance {
    pub fn new(graph: PlanarGraph, schedule: Circuit) -> Result<Self> {
        let n = graph.num_edges();
        if graph.has_dangling() {
            return Err(Error::InvalidGraph(
                "resource graph has dangling edges".into(),
            ));
        }
        if schedule.num_qubits() != n || schedule.len() != n {
            return Err(Error::InvalidCircuit(format!(
                "schedule must have {n} qubits and {n} gates, got {} and {}",
                schedule.num_qubits(),
                schedule.len()
            )));
        }
        for t in 0..n {
            if schedule.alternatives(t).any(|g| g.support() != [t]) {
                return Err(Error::InvalidCircuit(format!(
                    "schedule position {t} must be a single-qubit gate on edge {t}"
                )));
            }
        }
        Ok(SurfaceCodeInstance { graph, schedule })
    }

    /// Every edge measured without rotation.
    pub fn identity(graph: PlanarGraph) -> Result<Self> {
        let n = graph.num_edges();
        let id = |q: usize| Gate::rz(q, 0.0);
        Self::new(graph, Circuit::from_gates(n, (0..n).map(id))?)
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    pub fn schedule(&self) -> &Circuit {
        &self.schedule
    }

    /// `P_t(x)`: rules `1..=t` resolved against `x`, identity afterwards.
    pub fn prefix_probability(&self, t: usize, x: BitString) -> Result<f64> {
        let phi: Vec<Qubit> = (0..self.graph.num_edges())
            .map(|j| {
                let bit = x.get(j);
                if j < t {
                    // U_j† |x_j⟩ = conj of row x_j of U_j.
                    let g = self.schedule.resolve(j, x);
                    let r = bit as usize;
                    [g.entry(r, 0).conj(), g.entry(r, 1).conj()]
                } else {
                    basis_qubit(bit)
                }
            })
            .collect();
        Ok(product_state_overlap(&self.graph, &phi)?.norm_sqr())
    }

    /// Resamples edge `t` (0-based) from `P_{t+1}` restricted to `{x, x ⊕ e_t}`;
    /// returns the two candidate probabilities with `x_t = 0` first.
    fn step_law(&self, t: usize, x: BitString) -> Result<[f64; 2]> {
        let x0 = {
            let mut y = x;
            y.set(t, false);
            y
        };
        let x1 = x0.flipped(t);
        let p = [
            self.prefix_probability(t + 1, x0)?,
            self.prefix_probability(t + 1, x1)?,
        ];
        let mass = p[0] + p[1];
        if mass < PAIR_MASS_TOL {
            return Err(Error::ZeroBranchMass { t: t + 1, mass });
        }
        Ok([p[0] / mass, p[1] / mass])
    }

    /// Samples a measurement record: a uniform cycle, then one two-point
    /// resampling per edge in order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BitString> {
        let mut x = self.graph.sample_cycle(rng);
        for t in 0..self.graph.num_edges() {
            let law = self.step_law(t, x)?;
            x.set(t, rng.random::<f64>() < law[1]);
        }
        Ok(x)
    }

    /// Exact law of [`Self::sample`] by propagating the initial cycle law
    /// through every resampling step.
    pub fn induced_distribution(&self) -> Result<Distribution> {
        let n = self.graph.num_edges();
        crate::statevector::guard(n, MBQC_EXACT_MAX_EDGES)?;
        let mut law = Distribution::new(n);
        let p0 = 1.0 / self.graph.num_cycles() as f64;
        self.graph
            .for_each_cycle(n, |x| law.add(BitString::from_bits(x, n), p0))?;
        for t in 0..n {
            let mut next = Distribution::new(n);
            for (x, p) in law.iter() {
                let step = self.step_law(t, x)?;
                let mut y = x;
                for (bit, q) in [false, true].into_iter().zip(step) {
                    if q > 0.0 {
                        y.set(t, bit);
                        next.add(y, p * q);
                    }
                }
            }
            law = next;
        }
        Ok(law)
    }

    /// `|⟨x|U|ψ_G⟩|²` by dense simulation from `ψ_G`, branching on the
    /// outcomes that control adaptive rules.
    pub fn reference_distribution(&self) -> Result<Distribution> {
        let n = self.graph.num_edges();
        crate::statevector::guard(n, MBQC_EXACT_MAX_EDGES)?;
        reference_distribution_from(&self.schedule, surface_code_state(&self.graph)?)
    }
}

/// Haar-random rule per edge; with `adaptive`, each rule past the first
/// also gets a random alternative for every value of up to two earlier
/// outcomes.
pub fn random_schedule<R: Rng + ?Sized>(n: usize, adaptive: bool, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n);
    for t in 0..n {
        c.push(haar_gate(vec![t], rng)).expect("qubit in range");
        if adaptive && t > 0 {
            let k = rng.random_range(1..=t.min(2));
            let controls: Vec<usize> = rand::seq::index::sample(rng, t, k).into_vec();
            let mut table = ControlTable::new(controls);
            for v in 1..1u64 << k {
                table = table.with(v, haar_gate(vec![t], rng));
            }
            c.control_last(table).expect("controls precede the target");
        }
    }
    c
}

/// Dense `ψ_G`.
pub fn surface_code_state(g: &PlanarGraph) -> Result<Vec<Complex64>> {
    let n = g.num_edges();
    crate::statevector::guard(n, crate::statevector::MAX_QUBITS)?;
    let mut psi = vec![Complex64::new(0.0, 0.0); 1usize << n];
    let amp = 1.0 / (g.num_cycles() as f64).sqrt();
    g.for_each_cycle(n, |x| psi[x as usize] = Complex64::new(amp, 0.0))?;
    Ok(psi)
}

/// Convenience: one record from `inst`.
pub fn mbqc_sample<R: Rng + ?Sized>(inst: &SurfaceCodeInstance, rng: &mut R) -> Result<BitString> {
    inst.sample(rng)
}
