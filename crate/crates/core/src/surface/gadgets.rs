use std::f64::consts::PI;

use num_complex::Complex64;

use super::graph::{Edge, PlanarGraph};
use crate::error::{Error, Result};

pub const GADGET_MAX_EDGES: usize = 24;

/// Weighted graph with an ordered list of dangling edges.
#[derive(Clone, Debug)]
pub struct Gadget {
    graph: PlanarGraph,
    dangling: Vec<usize>,
}

impl Gadget {
    pub fn new(graph: PlanarGraph, dangling: Vec<usize>) -> Result<Self> {
        let mut listed = dangling.clone();
        listed.sort_unstable();
        let actual: Vec<usize> = (0..graph.num_edges())
            .filter(|&j| graph.edges()[j].is_dangling())
            .collect();
        if listed != actual {
            return Err(Error::InvalidGraph(
                "dangling order must list every dangling edge once".into(),
            ));
        }
        Ok(Gadget { graph, dangling })
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    pub fn dangling(&self) -> &[usize] {
        &self.dangling
    }

    /// Internal (two-endpoint) edges.
    pub fn internal(&self) -> Vec<usize> {
        (0..self.graph.num_edges())
            .filter(|&j| !self.graph.edges()[j].is_dangling())
            .collect()
    }

    /// `Δ(x)` packed with bit `i` for the `i`-th dangling edge.
    pub fn boundary(&self, x: u64) -> u64 {
        self.dangling
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &j)| acc | ((x >> j) & 1) << i)
    }

    /// `Cycle(Θ, z)` for every `z`, indexed by packed `z`.
    pub fn cycle_sums(&self) -> Result<Vec<Complex64>> {
        if self.graph.num_edges() > GADGET_MAX_EDGES {
            return Err(Error::Guard {
                what: "gadget edge count",
                value: self.graph.num_edges(),
                limit: GADGET_MAX_EDGES,
            });
        }
        let mut sums = vec![Complex64::new(0.0, 0.0); 1 << self.dangling.len()];
        self.graph.for_each_cycle(GADGET_MAX_EDGES, |x| {
            sums[self.boundary(x) as usize] += self.graph.weight_of(x);
        })?;
        Ok(sums)
    }
}

/// Packs a dangling-edge string written in order, `z_1 z_2 ...`.
pub fn pack(z: &str) -> u64 {
    z.chars()
        .enumerate()
        .fold(0, |acc, (i, c)| acc | ((c == '1') as u64) << i)
}

/// `Cycle(Θ, z) = Σ_{x∈𝒵(Θ), Δ(x)=z} Π_{j∈x} f(j)`, with `z` given in
/// dangling order as a string such as `"011"`.
pub fn weighted_cycle_sum(g: &Gadget, z: &str) -> Result<Complex64> {
    if z.len() != g.dangling.len() || z.chars().any(|c| c != '0' && c != '1') {
        return Err(Error::InvalidArgument(format!(
            "boundary string `{z}` must have {} bits",
            g.dangling.len()
        )));
    }
    Ok(g.cycle_sums()?[pack(z) as usize])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaWeights {
    pub a: Complex64,
    pub b: Complex64,
}

impl Default for ThetaWeights {
    fn default() -> Self {
        ThetaWeights {
            a: Complex64::from_polar(1.0, PI / 3.0),
            b: Complex64::new(3f64.powf(-0.25), 0.0),
        }
    }
}

/// 2-factor gadget: a triangle `v0 v1 v2` of `a` edges (ids 0–2), an edge
/// `v_i – w_i` of weight `b` at each corner (ids 3–5) and a dangling edge
/// at each `w_i` (ids 6–8).
pub fn theta(w: ThetaWeights) -> Gadget {
    let edges = vec![
        Edge::new(0, 1),
        Edge::new(1, 2),
        Edge::new(2, 0),
        Edge::new(0, 3),
        Edge::new(1, 4),
        Edge::new(2, 5),
        Edge::dangling(3),
        Edge::dangling(4),
        Edge::dangling(5),
    ];
    let one = Complex64::new(1.0, 0.0);
    let weights = vec![w.a, w.a, w.a, w.b, w.b, w.b, one, one, one];
    let graph = PlanarGraph::new(6, edges)
        .and_then(|g| g.with_weights(weights))
        .expect("fixed gadget topology");
    Gadget::new(graph, vec![6, 7, 8]).expect("fixed gadget topology")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaWeights {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Default for GammaWeights {
    fn default() -> Self {
        let d2 = (Complex64::new(1.0, 0.0) - 2f64.sqrt() * Complex64::from_polar(1.0, PI / 12.0)
            + Complex64::from_polar(1.0, PI / 6.0))
        .norm();
        GammaWeights {
            a: Complex64::from_polar(1.0, PI / 4.0),
            b: Complex64::from_polar(1.0, -PI / 6.0),
            c: Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
            d: Complex64::new(d2.sqrt(), 0.0),
        }
    }
}

/// Crossing gadget on vertices `P=0, Q=1, x1=2, x2=3, y1=4, y2=5,
/// w1..w4=6..9`: paths `P–x1–x2–Q` and `P–y1–y2–Q` with weights `b, a, b`
/// (ids 0–5), a direct `P–Q` edge of weight `c` (id 6), `d` edges
/// `x1–w1, x2–w2, y2–w3, y1–w4` (ids 7–10) and dangling edges at
/// `w1..w4` (ids 11–14) in clockwise order.
pub fn gamma(w: GammaWeights) -> Gadget {
    let edges = vec![
        Edge::new(0, 2),
        Edge::new(2, 3),
        Edge::new(3, 1),
        Edge::new(0, 4),
        Edge::new(4, 5),
        Edge::new(5, 1),
        Edge::new(0, 1),
        Edge::new(2, 6),
        Edge::new(3, 7),
        Edge::new(5, 8),
        Edge::new(4, 9),
        Edge::dangling(6),
        Edge::dangling(7),
        Edge::dangling(8),
        Edge::dangling(9),
    ];
    let one = Complex64::new(1.0, 0.0);
    let weights = vec![
        w.b, w.a, w.b, w.b, w.a, w.b, w.c, w.d, w.d, w.d, w.d, one, one, one, one,
    ];
    let graph = PlanarGraph::new(10, edges)
        .and_then(|g| g.with_weights(weights))
        .expect("fixed gadget topology");
    Gadget::new(graph, vec![11, 12, 13, 14]).expect("fixed gadget topology")
}

/// Closed-form `Cycle(Γ, z)` polynomials for the five representative
/// boundary strings, in the order `0000, 1100, 1010, 0110, 1111`.
pub fn gamma_polynomials(w: GammaWeights) -> [Complex64; 5] {
    let GammaWeights { a, b, c, d } = w;
    let (b2, b4, d2) = (b * b, b * b * b * b, d * d);
    [
        1.0 + 2.0 * a * b2 * c + a * a * b4,
        d2 * (a + b2 * c + a * b4 + a * a * b2 * c),
        d2 * (b2 * c + 2.0 * a * b2 + a * a * b2 * c),
        d2 * (b2 + a * a * b2 + 2.0 * a * b2 * c),
        d2 * d2 * (a * a + b4 + 2.0 * a * b2 * c),
    ]
}

pub const GAMMA_REPRESENTATIVES: [&str; 5] = ["0000", "1100", "1010", "0110", "1111"];

/// Outcome of the gadget identities.
#[derive(Clone, Debug)]
pub struct GadgetReport {
    pub theta_000: Complex64,
    /// `|Cycle(Θ, z)|` for `z = 011, 101, 110`.
    pub theta_weight_two: [f64; 3],
    pub gamma: Vec<Complex64>,
    /// `|Cycle(Γ, z)|²` for `z = 0000, 1010, 1111`.
    pub condition1: [f64; 3],
    /// `Cycle(Γ, 1100)`, `Cycle(Γ, 0110)`.
    pub condition2: [Complex64; 2],
    pub tau: f64,
    /// `τ |Cycle(Γ, z)|²` over the even strings, in index order.
    pub crossing_table: Vec<(String, f64)>,
    /// Largest violation of the reversal and pair-swap symmetries.
    pub symmetry_error: f64,
    /// Largest distance between enumerated cycle sums and the closed forms.
    pub polynomial_error: f64,
}

pub const THETA_TOL: f64 = 1e-12;
pub const GAMMA_TOL: f64 = 1e-9;

impl GadgetReport {
    /// Each identity with its status, for printing.
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        let c1 = self.condition1;
        let spread = c1.iter().cloned().fold(f64::MIN, f64::max)
            - c1.iter().cloned().fold(f64::MAX, f64::min);
        let table_ok = self.crossing_table.iter().all(|(z, v)| {
            let b: Vec<bool> = z.chars().map(|c| c == '1').collect();
            let want = if b[0] == b[2] && b[1] == b[3] {
                1.0
            } else {
                0.0
            };
            (v - want).abs() <= GAMMA_TOL
        });
        vec![
            ("theta: Cycle(000) = 0", self.theta_000.norm() <= THETA_TOL),
            (
                "theta: |Cycle(z)| = 1 on weight-2 z",
                self.theta_weight_two
                    .iter()
                    .all(|m| (m - 1.0).abs() <= THETA_TOL),
            ),
            (
                "gamma: Cycle(1100) = Cycle(0110) = 0",
                self.condition2.iter().all(|c| c.norm() <= GAMMA_TOL),
            ),
            (
                "gamma: |Cycle(0000)|² = |Cycle(1010)|² = |Cycle(1111)|²",
                spread <= GAMMA_TOL,
            ),
            ("gamma: crossing table", table_ok),
            ("gamma: symmetries", self.symmetry_error <= GAMMA_TOL),
            (
                "gamma: closed-form polynomials",
                self.polynomial_error <= GAMMA_TOL,
            ),
        ]
    }

    pub fn passes(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }
}

fn reverse(z: u64, k: usize) -> u64 {
    (0..k).fold(0, |acc, i| acc | ((z >> i) & 1) << (k - 1 - i))
}

fn swap_pairs(z: u64) -> u64 {
    ((z & 0b0101) << 1) | ((z & 0b1010) >> 1)
}

/// Evaluates both gadgets at the given weights. The closed-form comparison
/// uses the same weights plus three random generic weight sets, so it
/// checks the topology rather than one numerical coincidence.
pub fn verify_gadgets_with(tw: ThetaWeights, gw: GammaWeights) -> Result<GadgetReport> {
    let th = theta(tw).cycle_sums()?;
    let gm = gamma(gw).cycle_sums()?;
    let at = |z: &str| gm[pack(z) as usize];
    let condition1 = ["0000", "1010", "1111"].map(|z| at(z).norm_sqr());
    let tau = 1.0 / condition1[0];
    let crossing_table = (0..16u64)
        .filter(|z| z.count_ones() % 2 == 0)
        .map(|z| {
            let s: String = (0..4)
                .map(|i| if z >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            (s, tau * gm[z as usize].norm_sqr())
        })
        .collect();
    let symmetry_error = (0..16u64)
        .map(|z| {
            let r = (gm[z as usize] - gm[reverse(z, 4) as usize]).norm();
            let s = (gm[z as usize] - gm[swap_pairs(z) as usize]).norm();
            r.max(s)
        })
        .fold(0.0, f64::max);

    let mut rng = crate::rng::seeded(0x6a);
    let mut weight_sets = vec![gw];
    for _ in 0..3 {
        use rand::Rng;
        let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        weight_sets.push(GammaWeights {
            a: c(),
            b: c(),
            c: c(),
            d: c(),
        });
    }
    let mut polynomial_error = 0.0f64;
    for ws in weight_sets {
        let sums = gamma(ws).cycle_sums()?;
        for (z, p) in GAMMA_REPRESENTATIVES.iter().zip(gamma_polynomials(ws)) {
            polynomial_error = polynomial_error.max((sums[pack(z) as usize] - p).norm());
        }
    }
    Ok(GadgetReport {
        theta_000: th[0],
        theta_weight_two: ["011", "101", "110"].map(|z| th[pack(z) as usize].norm()),
        gamma: gm.clone(),
        condition1,
        condition2: [at("1100"), at("0110")],
        tau,
        crossing_table,
        symmetry_error,
        polynomial_error,
    })
}

pub fn verify_gadgets() -> Result<GadgetReport> {
    verify_gadgets_with(ThetaWeights::default(), GammaWeights::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_closed_forms() {
        let w = ThetaWeights {
            a: Complex64::new(0.3, 0.7),
            b: Complex64::new(-1.1, 0.2),
        };
        let g = theta(w);
        let z0 = weighted_cycle_sum(&g, "000").unwrap();
        assert!((z0 - (1.0 + w.a * w.a * w.a)).norm() < 1e-14);
        for z in ["011", "101", "110"] {
            let v = weighted_cycle_sum(&g, z).unwrap();
            assert!((v - w.b * w.b * (w.a + w.a * w.a)).norm() < 1e-14);
        }
    }

    #[test]
    fn odd_boundaries_vanish() {
        let sums = gamma(GammaWeights::default()).cycle_sums().unwrap();
        for (z, s) in sums.iter().enumerate() {
            if z.count_ones() % 2 == 1 {
                assert_eq!(*s, Complex64::new(0.0, 0.0));
            }
        }
    }
}
