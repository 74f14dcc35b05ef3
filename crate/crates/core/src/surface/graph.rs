use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;

use crate::bits::BitString;
use crate::circuit::parse::parse_complex;
use crate::error::{parse_err, Error, Result};

pub const MAX_EDGES: usize = 64;

/// Edge with one endpoint (`v = None`) for dangling edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: Option<usize>,
}

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        Edge { u, v: Some(v) }
    }

    pub fn dangling(u: usize) -> Self {
        Edge { u, v: None }
    }

    pub fn is_dangling(&self) -> bool {
        self.v.is_none()
    }

    pub fn is_loop(&self) -> bool {
        self.v == Some(self.u)
    }
}

/// Multigraph with qubits on edges, optional face boundaries, per-edge
/// weights and per-vertex edge orders. Edge sets are `u64` masks with bit
/// `j` for edge `j`.
#[derive(Clone, Debug)]
pub struct PlanarGraph {
    edges: Vec<Edge>,
    num_vertices: usize,
    faces: Option<Vec<u64>>,
    weights: Vec<Complex64>,
    order: BTreeMap<usize, Vec<usize>>,
    /// Per vertex, the edges meeting it an odd number of times.
    incidence: Vec<u64>,
    /// Independent basis of the cycle space.
    basis: Vec<u64>,
}

impl PlanarGraph {
    /// Graph on vertices `0..num_vertices` with unit weights, no faces and
    /// edges ordered by id at every vertex.
    pub fn new(num_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if edges.len() > MAX_EDGES {
            return Err(Error::Guard {
                what: "edge count",
                value: edges.len(),
                limit: MAX_EDGES,
            });
        }
        let mut incidence = vec![0u64; num_vertices];
        let mut order: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (j, e) in edges.iter().enumerate() {
            for w in std::iter::once(e.u).chain(e.v) {
                if w >= num_vertices {
                    return Err(Error::InvalidGraph(format!(
                        "edge {j} uses vertex {w} outside 0..{num_vertices}"
                    )));
                }
                incidence[w] ^= 1 << j;
                order.entry(w).or_default().push(j);
            }
        }
        let basis = nullspace(&incidence, edges.len());
        Ok(PlanarGraph {
            weights: vec![Complex64::new(1.0, 0.0); edges.len()],
            edges,
            num_vertices,
            faces: None,
            order,
            incidence,
            basis,
        })
    }

    /// Attaches face boundaries; each must be a cycle and together they
    /// must span the cycle space.
    pub fn with_faces(mut self, faces: Vec<Vec<usize>>) -> Result<Self> {
        let mut masks = Vec::with_capacity(faces.len());
        for (f, face) in faces.iter().enumerate() {
            let mut mask = 0u64;
            for &j in face {
                if j >= self.edges.len() {
                    return Err(Error::InvalidGraph(format!(
                        "face {f} uses unknown edge {j}"
                    )));
                }
                mask ^= 1 << j;
            }
            if !self.is_cycle(mask) {
                return Err(Error::FaceNotCycle { face: f });
            }
            masks.push(mask);
        }
        let independent = row_basis(&masks);
        if independent.len() != self.basis.len() {
            return Err(Error::RankDeficient {
                rank: independent.len(),
                dim: self.basis.len(),
            });
        }
        self.basis = independent;
        self.faces = Some(masks);
        Ok(self)
    }

    /// Edge weights; dangling edges must carry weight 1.
    pub fn with_weights(mut self, weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidGraph(format!(
                "{} weights for {} edges",
                weights.len(),
                self.edges.len()
            )));
        }
        for (j, (e, w)) in self.edges.iter().zip(&weights).enumerate() {
            if e.is_dangling() && (w - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                return Err(Error::InvalidGraph(format!(
                    "dangling edge {j} has weight {w}"
                )));
            }
        }
        self.weights = weights;
        Ok(self)
    }

    /// Clockwise edge order at `vertex`; must list its incident edges.
    pub fn with_order(mut self, vertex: usize, edges: Vec<usize>) -> Result<Self> {
        let mut want = self.order.get(&vertex).cloned().unwrap_or_default();
        let mut got = edges.clone();
        want.sort_unstable();
        got.sort_unstable();
        if want != got {
            return Err(Error::InvalidGraph(format!(
                "order at vertex {vertex} does not list its incident edges"
            )));
        }
        self.order.insert(vertex, edges);
        Ok(self)
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn faces(&self) -> Option<&[u64]> {
        self.faces.as_deref()
    }

    pub fn order(&self, vertex: usize) -> &[usize] {
        self.order.get(&vertex).map_or(&[], Vec::as_slice)
    }

    pub fn has_dangling(&self) -> bool {
        self.edges.iter().any(Edge::is_dangling)
    }

    /// Every vertex meets an even number of edges of `x`.
    pub fn is_cycle(&self, x: u64) -> bool {
        self.incidence
            .iter()
            .all(|m| (m & x).count_ones().is_multiple_of(2))
    }

    /// Independent basis of the cycle space (the faces when given).
    pub fn cycle_space_basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn cycle_space_dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of cycles, `2^dim`.
    pub fn num_cycles(&self) -> u128 {
        1u128 << self.basis.len()
    }

    /// Visits every cycle once in Gray-code order, starting from the empty
    /// one.
    pub fn for_each_cycle(&self, limit: usize, mut f: impl FnMut(u64)) -> Result<()> {
        let dim = self.basis.len();
        if dim > limit {
            return Err(Error::Guard {
                what: "cycle space dimension",
                value: dim,
                limit,
            });
        }
        let mut x = 0u64;
        f(x);
        for i in 1u64..1 << dim {
            x ^= self.basis[i.trailing_zeros() as usize];
            f(x);
        }
        Ok(())
    }

    /// Uniformly random cycle `Σ r_j b_j` with uniform `r` over the face
    /// boundaries, or over the computed basis when no faces were given.
    pub fn sample_cycle<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let gens = self.faces.as_deref().unwrap_or(&self.basis);
        let x = gens
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .fold(0u64, |acc, b| acc ^ b);
        BitString::from_bits(x, self.edges.len())
    }

    /// `Π_{j∈x} f(j)`.
    pub fn weight_of(&self, x: u64) -> Complex64 {
        let mut w = Complex64::new(1.0, 0.0);
        let mut rest = x;
        while rest != 0 {
            w *= self.weights[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        w
    }

    /// Parses the sectioned text format: `edges` (`id u v`, `id u -`),
    /// `faces` (edge ids), `weights` (`id re,im`), `order` (`u id ...`).
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Edges,
            Faces,
            Weights,
            Order,
        }
        let mut section = Section::None;
        let mut edges: BTreeMap<usize, (Edge, usize)> = BTreeMap::new();
        let mut faces: Option<Vec<(Vec<usize>, usize)>> = None;
        let mut weights: Vec<(usize, Complex64, usize)> = Vec::new();
        let mut orders: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        let num = |tok: &str, line: usize| -> Result<usize> {
            tok.parse().map_err(|_| {
                parse_err(
                    line,
                    format!("expected a non-negative integer, got `{tok}`"),
                )
            })
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            match toks.as_slice() {
                ["edges"] => section = Section::Edges,
                ["faces"] => {
                    section = Section::Faces;
                    faces.get_or_insert_with(Vec::new);
                }
                ["weights"] => section = Section::Weights,
                ["order"] => section = Section::Order,
                _ => match section {
                    Section::None => {
                        return Err(parse_err(
                            line,
                            "expected a section header (`edges`, `faces`, `weights`, `order`)",
                        ))
                    }
                    Section::Edges => {
                        let [id, u, v] = toks.as_slice() else {
                            return Err(parse_err(line, "expected `id u v` or `id u -`"));
                        };
                        let id = num(id, line)?;
                        let u = num(u, line)?;
                        let e = if *v == "-" {
                            Edge::dangling(u)
                        } else {
                            Edge::new(u, num(v, line)?)
                        };
                        if edges.insert(id, (e, line)).is_some() {
                            return Err(parse_err(line, format!("duplicate edge id {id}")));
                        }
                    }
                    Section::Faces => {
                        let ids = toks.iter().map(|t| num(t, line)).collect::<Result<_>>()?;
                        faces.get_or_insert_with(Vec::new).push((ids, line));
                    }
                    Section::Weights => {
                        let [id, w] = toks.as_slice() else {
                            return Err(parse_err(line, "expected `id re,im`"));
                        };
                        let c = parse_complex(w).map_err(|m| parse_err(line, m))?;
                        weights.push((num(id, line)?, c, line));
                    }
                    Section::Order => {
                        let u = num(toks[0], line)?;
                        let ids = toks[1..]
                            .iter()
                            .map(|t| num(t, line))
                            .collect::<Result<_>>()?;
                        orders.push((u, ids, line));
                    }
                },
            }
        }
        for (expect, (&id, &(_, line))) in edges.iter().enumerate() {
            if id != expect {
                return Err(parse_err(
                    line,
                    format!("edge ids must be 0..n-1; missing {expect}"),
                ));
            }
        }
        let list: Vec<Edge> = edges.values().map(|(e, _)| *e).collect();
        let num_vertices = list
            .iter()
            .flat_map(|e| std::iter::once(e.u).chain(e.v))
            .max()
            .map_or(0, |m| m + 1);
        let mut g = PlanarGraph::new(num_vertices, list)?;
        let mut w = g.weights.clone();
        for (id, c, line) in weights {
            if id >= w.len() {
                return Err(parse_err(line, format!("unknown edge {id}")));
            }
            w[id] = c;
        }
        g = g.with_weights(w)?;
        for (u, ids, line) in orders {
            g = g
                .with_order(u, ids)
                .map_err(|e| parse_err(line, e.to_string()))?;
        }
        if let Some(faces) = faces {
            let first = faces.first().map_or(0, |f| f.1);
            g = g
                .with_faces(faces.into_iter().map(|f| f.0).collect())
                .map_err(|e| match e {
                    Error::FaceNotCycle { .. } | Error::InvalidGraph(_) => {
                        parse_err(first, e.to_string())
                    }
                    e => e,
                })?;
        }
        Ok(g)
    }

    pub fn parse_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("edges\n");
        for (j, e) in self.edges.iter().enumerate() {
            match e.v {
                Some(v) => out.push_str(&format!("{j} {} {v}\n", e.u)),
                None => out.push_str(&format!("{j} {} -\n", e.u)),
            }
        }
        if let Some(faces) = &self.faces {
            out.push_str("faces\n");
            for f in faces {
                let ids: Vec<String> = (0..64)
                    .filter(|j| f >> j & 1 == 1)
                    .map(|j| j.to_string())
                    .collect();
                out.push_str(&ids.join(" "));
                out.push('\n');
            }
        }
        if self.weights.iter().any(|w| *w != Complex64::new(1.0, 0.0)) {
            out.push_str("weights\n");
            for (j, w) in self.weights.iter().enumerate() {
                out.push_str(&format!("{j} {:e},{:e}\n", w.re, w.im));
            }
        }
        out.push_str("order\n");
        for (u, ids) in &self.order {
            let ids: Vec<String> = ids.iter().map(usize::to_string).collect();
            out.push_str(&format!("{u} {}\n", ids.join(" ")));
        }
        out
    }
}

/// Cycle on `k` vertices with its single bounded face.
pub fn polygon(k: usize) -> PlanarGraph {
    let edges = (0..k).map(|i| Edge::new(i, (i + 1) % k)).collect();
    PlanarGraph::new(k, edges)
        .and_then(|g| g.with_faces(vec![(0..k).collect()]))
        .expect("polygon is well formed")
}

/// Grid of `rows × cols` vertices with its unit squares as faces.
/// Horizontal edges come first, row by row, then vertical edges.
pub fn grid(rows: usize, cols: usize) -> Result<PlanarGraph> {
    let v = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols.saturating_sub(1) {
            edges.push(Edge::new(v(r, c), v(r, c + 1)));
        }
    }
    let horizontal = edges.len();
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols {
            edges.push(Edge::new(v(r, c), v(r + 1, c)));
        }
    }
    let h = |r: usize, c: usize| r * (cols - 1) + c;
    let vert = |r: usize, c: usize| horizontal + r * cols + c;
    let mut faces = Vec::new();
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            faces.push(vec![h(r, c), h(r + 1, c), vert(r, c), vert(r, c + 1)]);
        }
    }
    PlanarGraph::new(rows * cols, edges)?.with_faces(faces)
}

/// Reduced row basis of `rows` over GF(2).
pub(crate) fn row_basis(rows: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// Basis of `{x : (row & x) has even weight for every row}` over `n` bits.
fn nullspace(rows: &[u64], n: usize) -> Vec<u64> {
    let mut reduced: Vec<(usize, u64)> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &(p, b) in &reduced {
            if v >> p & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let p = v.trailing_zeros() as usize;
        for entry in reduced.iter_mut() {
            if entry.1 >> p & 1 == 1 {
                entry.1 ^= v;
            }
        }
        reduced.push((p, v));
    }
    let pivots: u64 = reduced.iter().map(|&(p, _)| 1u64 << p).sum();
    (0..n)
        .filter(|&f| pivots >> f & 1 == 0)
        .map(|f| {
            reduced
                .iter()
                .filter(|&&(_, b)| b >> f & 1 == 1)
                .fold(1u64 << f, |x, &(p, _)| x | 1 << p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_vectors_are_cycles() {
        let g = PlanarGraph::new(
            4,
            vec![
                Edge::new(0, 1),
                Edge::new(1, 2),
                Edge::new(2, 3),
                Edge::new(3, 0),
                Edge::new(0, 2),
            ],
        )
        .unwrap();
        assert_eq!(g.cycle_space_dim(), 2);
        assert!(g
            .cycle_space_basis()
            .iter()
            .all(|&b| g.is_cycle(b) && b != 0));
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let g = PlanarGraph::new(1, vec![Edge::new(0, 0)]).unwrap();
        assert!(g.is_cycle(1));
        assert_eq!(g.cycle_space_dim(), 1);
    }

    #[test]
    fn dangling_edges_join_cycles_through_open_ends() {
        let g = PlanarGraph::new(1, vec![Edge::dangling(0), Edge::dangling(0)]).unwrap();
        assert_eq!(g.cycle_space_basis(), &[0b11]);
    }

    #[test]
    fn row_basis_rank() {
        assert_eq!(row_basis(&[0b11, 0b110, 0b101]).len(), 2);
    }
}
