use num_complex::Complex64;

use super::gadgets::{gamma, pack, theta, Gadget, GammaWeights, ThetaWeights};
use super::graph::{Edge, PlanarGraph};
use super::overlap::{marginal_overlap, Qubit};
use crate::error::{Error, Result};

/// Results further than this from an integer indicate a construction error.
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// Planarized drawing of a 3-regular multigraph: vertices
/// `0..original` are the graph's vertices, the next `crossing_order.len()`
/// vertices are crossing points. `crossing_order[i]` lists the four edges
/// at crossing `i` clockwise; slots 0 and 2 continue one original edge,
/// slots 1 and 3 the other.
#[derive(Clone, Debug)]
pub struct Drawing {
    pub original: usize,
    pub edges: Vec<(usize, usize)>,
    pub crossing_order: Vec<[usize; 4]>,
}

impl Drawing {
    pub fn planar(original: usize, edges: Vec<(usize, usize)>) -> Self {
        Drawing {
            original,
            edges,
            crossing_order: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.original + self.crossing_order.len()
    }

    fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&j| self.edges[j].0 == v || self.edges[j].1 == v)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                return Err(Error::InvalidGraph(format!("edge {j} is a self-loop")));
            }
            if u.max(v) >= self.num_vertices() {
                return Err(Error::InvalidGraph(format!(
                    "edge {j} uses an unknown vertex"
                )));
            }
        }
        for v in 0..self.original {
            let d = self.incident(v).len();
            if d != 3 {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} has degree {d}, expected 3"
                )));
            }
        }
        for (i, order) in self.crossing_order.iter().enumerate() {
            let v = self.original + i;
            let mut got = order.to_vec();
            got.sort_unstable();
            if got != self.incident(v) {
                return Err(Error::InvalidGraph(format!(
                    "crossing {v} order does not list its four incident edges"
                )));
            }
        }
        Ok(())
    }

    /// Edge order at `v`: id order at graph vertices, the given order at
    /// crossings.
    fn order(&self, v: usize) -> Vec<usize> {
        if v < self.original {
            self.incident(v)
        } else {
            self.crossing_order[v - self.original].to_vec()
        }
    }

    /// Edges of the underlying 3-regular graph, each traced through the
    /// crossings it passes.
    pub fn original_edges(&self) -> Result<Vec<(usize, usize)>> {
        self.validate()?;
        let mut used = vec![false; self.edges.len()];
        let mut out = Vec::new();
        for start in 0..self.edges.len() {
            let (a, b) = self.edges[start];
            if used[start] || (a >= self.original && b >= self.original) {
                continue;
            }
            let from = if a < self.original { a } else { b };
            let (mut at, mut edge) = (from, start);
            loop {
                used[edge] = true;
                let (p, q) = self.edges[edge];
                let next = if p == at { q } else { p };
                if next < self.original {
                    out.push((from, next));
                    break;
                }
                let order = &self.crossing_order[next - self.original];
                let slot = order
                    .iter()
                    .position(|&e| e == edge)
                    .expect("validated order");
                at = next;
                edge = order[(slot + 2) % 4];
            }
        }
        if let Some(j) = used.iter().position(|u| !u) {
            return Err(Error::InvalidGraph(format!(
                "edge {j} lies on a closed curve of crossings"
            )));
        }
        Ok(out)
    }
}

/// Perfect matchings of a multigraph on `n` vertices by exhaustive search.
pub fn count_perfect_matchings(n: usize, edges: &[(usize, usize)]) -> u64 {
    fn go(matched: &mut [bool], edges: &[(usize, usize)]) -> u64 {
        let Some(v) = matched.iter().position(|m| !m) else {
            return 1;
        };
        let mut total = 0;
        for &(a, b) in edges {
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if w != v && !matched[w] {
                matched[v] = true;
                matched[w] = true;
                total += go(matched, edges);
                matched[v] = false;
                matched[w] = false;
            }
        }
        total
    }
    go(&mut vec![false; n], edges)
}

/// Gadget-expanded graph, the product state on its internal edges and the
/// accumulated normalization.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub graph: PlanarGraph,
    /// Internal edges `M`.
    pub internal: u64,
    /// Normalized `φ_j ∝ |0⟩ + f(j)|1⟩` on internal edges, `|0⟩` elsewhere.
    pub phi: Vec<Qubit>,
    /// Product of gadget normalizations and state norms.
    pub sigma: f64,
}

/// Substitutes `Θ` at graph vertices and `Γ` at crossings.
pub fn build_reduction(
    d: &Drawing,
    tw: ThetaWeights,
    gw: GammaWeights,
) -> Result<ReductionInstance> {
    d.validate()?;
    let th = theta(tw);
    let gm = gamma(gw);
    let tau = |g: &Gadget, z: &str| -> Result<f64> {
        Ok(1.0 / g.cycle_sums()?[pack(z) as usize].norm_sqr())
    };
    let (tau_theta, tau_gamma) = (tau(&th, "011")?, tau(&gm, "0000")?);

    let mut edges: Vec<Edge> = Vec::new();
    let mut weights: Vec<Complex64> = Vec::new();
    let mut internal = 0u64;
    let mut sigma = 1.0;
    let mut vertex_base = 0usize;
    // Per drawing vertex, the gadget vertex where each incident edge attaches.
    let mut attach: Vec<Vec<(usize, usize)>> = Vec::new();
    for v in 0..d.num_vertices() {
        let (g, t) = if v < d.original {
            (&th, tau_theta)
        } else {
            (&gm, tau_gamma)
        };
        sigma *= t;
        let gg = g.graph();
        for (j, e) in gg.edges().iter().enumerate() {
            if let Some(w) = e.v {
                if edges.len() >= super::graph::MAX_EDGES {
                    return Err(Error::Guard {
                        what: "expanded edge count",
                        value: edges.len() + 1,
                        limit: super::graph::MAX_EDGES,
                    });
                }
                internal |= 1 << edges.len();
                edges.push(Edge::new(vertex_base + e.u, vertex_base + w));
                weights.push(gg.weights()[j]);
            }
        }
        let order = d.order(v);
        attach.push(
            order
                .iter()
                .zip(g.dangling())
                .map(|(&ext, &dj)| (ext, vertex_base + gg.edges()[dj].u))
                .collect(),
        );
        vertex_base += gg.num_vertices();
    }
    for (j, &(u, v)) in d.edges.iter().enumerate() {
        let end = |x: usize| {
            attach[x]
                .iter()
                .find(|(e, _)| *e == j)
                .map(|(_, w)| *w)
                .expect("validated")
        };
        if edges.len() >= super::graph::MAX_EDGES {
            return Err(Error::Guard {
                what: "expanded edge count",
                value: edges.len() + 1,
                limit: super::graph::MAX_EDGES,
            });
        }
        edges.push(Edge::new(end(u), end(v)));
        weights.push(Complex64::new(1.0, 0.0));
    }
    let phi = weights
        .iter()
        .enumerate()
        .map(|(j, f)| {
            if internal >> j & 1 == 1 {
                let norm2 = 1.0 + f.norm_sqr();
                sigma *= norm2;
                let s = norm2.sqrt();
                [Complex64::new(1.0 / s, 0.0), f / s]
            } else {
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
            }
        })
        .collect();
    let graph = PlanarGraph::new(vertex_base, edges)?.with_weights(weights)?;
    Ok(ReductionInstance {
        graph,
        internal,
        phi,
        sigma,
    })
}

/// Count from the marginal overlap, the raw value and the direct count.
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub count: u64,
    pub value: f64,
    pub mu: f64,
    pub sigma: f64,
    pub cycle_dim: usize,
    pub expanded_edges: usize,
    pub brute_force: u64,
}

impl ReductionReport {
    pub fn agrees(&self) -> bool {
        self.count == self.brute_force
    }
}

/// `PerfMatch(G′) = σ · |𝒵(G)| · ⟨Φ|ρ_M|Φ⟩` on the gadget-expanded graph.
pub fn perfect_matchings_via_reduction(d: &Drawing) -> Result<ReductionReport> {
    reduction_with(d, ThetaWeights::default(), GammaWeights::default())
}

pub fn reduction_with(d: &Drawing, tw: ThetaWeights, gw: GammaWeights) -> Result<ReductionReport> {
    let original = d.original_edges()?;
    let inst = build_reduction(d, tw, gw)?;
    let mu = marginal_overlap(&inst.graph, inst.internal, &inst.phi)?;
    let value = inst.sigma * inst.graph.num_cycles() as f64 * mu;
    let rounded = value.round();
    if (value - rounded).abs() > INTEGRALITY_TOL || rounded < 0.0 {
        return Err(Error::NonIntegral(value));
    }
    Ok(ReductionReport {
        count: rounded as u64,
        value,
        mu,
        sigma: inst.sigma,
        cycle_dim: inst.graph.cycle_space_dim(),
        expanded_edges: inst.graph.num_edges(),
        brute_force: count_perfect_matchings(d.original, &original),
    })
}

/// `K₄` drawn without crossings.
pub fn k4() -> Drawing {
    Drawing::planar(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// `K₃,₃` as the hexagon `a1 b1 a2 b2 a3 b3` (vertices 0–5) with chords
/// `a3–b1` outside and `a1–b2`, `a2–b3` inside, crossing at vertex 6.
pub fn k33_one_crossing() -> Drawing {
    let edges = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 0),
        (4, 1),
        (0, 6),
        (6, 3),
        (2, 6),
        (6, 5),
    ];
    Drawing {
        original: 6,
        edges,
        crossing_order: vec![[7, 9, 8, 10]],
    }
}

/// Two vertices joined by three parallel edges.
pub fn triple_edge() -> Drawing {
    Drawing::planar(2, vec![(0, 1), (0, 1), (0, 1)])
}
