use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;

use crate::bits::BitString;
use crate::circuit::parse::parse_complex;
use crate::error::{parse_err, Error, Result};

/// Entries below this modulus are dropped when assembling the matrix.
const PRUNE_TOL: f64 = 1e-14;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const HAMILTONIAN_MAX_QUBITS: usize = 14;

/// `coeff · σ_{w_0} ⊗ ⋯ ⊗ σ_{w_{n−1}}`; character `j` of the word acts on
/// qubit `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    pub word: String,
}

impl PauliTerm {
    pub fn new(coeff: impl Into<Complex64>, word: &str) -> Self {
        PauliTerm {
            coeff: coeff.into(),
            word: word.to_string(),
        }
    }

    /// `(x mask, z mask, number of Y factors)`, with `σ = i^{#Y} X^x Z^z`.
    fn masks(&self) -> Result<(u64, u64, u32)> {
        let (mut x, mut z, mut ny) = (0u64, 0u64, 0u32);
        for (j, ch) in self.word.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => x |= 1 << j,
                'Z' => z |= 1 << j,
                'Y' => {
                    x |= 1 << j;
                    z |= 1 << j;
                    ny += 1;
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "invalid Pauli letter {ch:?} in `{}`",
                        self.word
                    )))
                }
            }
        }
        Ok((x, z, ny))
    }
}

/// Hermitian operator stored as sparse rows `⟨x|H|y⟩`.
#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    n: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
    terms: Vec<PauliTerm>,
}

fn i_pow(k: u32) -> Complex64 {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][(k % 4) as usize]
}

impl SparseHamiltonian {
    pub fn from_terms(n: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        crate::statevector::guard(n, HAMILTONIAN_MAX_QUBITS)?;
        let dim = 1usize << n;
        let mut maps: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); dim];
        for term in &terms {
            if term.word.chars().count() != n {
                return Err(Error::InvalidArgument(format!(
                    "Pauli word `{}` does not have length {n}",
                    term.word
                )));
            }
            let (xm, zm, ny) = term.masks()?;
            let phase = term.coeff * i_pow(ny);
            for y in 0..dim {
                let sign = if (zm & y as u64).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                *maps[y ^ xm as usize].entry(y).or_default() += phase * sign;
            }
        }
        Self::from_maps(n, maps, terms)
    }

    /// Explicit entries `(x, y, ⟨x|H|y⟩)`; repeated positions add up.
    pub fn from_entries(n: usize, entries: &[(BitString, BitString, Complex64)]) -> Result<Self> {
        crate::statevector::guard(n, HAMILTONIAN_MAX_QUBITS)?;
        let mut maps: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); 1 << n];
        for &(x, y, v) in entries {
            if x.len() != n || y.len() != n {
                return Err(Error::InvalidArgument(
                    "entry bit strings of wrong length".into(),
                ));
            }
            *maps[x.index()].entry(y.index()).or_default() += v;
        }
        Self::from_maps(n, maps, Vec::new())
    }

    fn from_maps(
        n: usize,
        maps: Vec<BTreeMap<usize, Complex64>>,
        terms: Vec<PauliTerm>,
    ) -> Result<Self> {
        let rows: Vec<Vec<(usize, Complex64)>> = maps
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .filter(|(_, v)| v.norm() > PRUNE_TOL)
                    .collect()
            })
            .collect();
        let h = SparseHamiltonian { n, rows, terms };
        let deviation = h.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(h)
    }

    fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, v) in row {
                worst = worst.max((v - self.entry(y, x).conj()).norm());
            }
        }
        worst
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// `⟨x|H|y⟩`.
    pub fn entry(&self, x: usize, y: usize) -> Complex64 {
        match self.rows[x].binary_search_by_key(&y, |e| e.0) {
            Ok(i) => self.rows[x][i].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Nonzero entries of row `x`.
    pub fn row(&self, x: usize) -> &[(usize, Complex64)] {
        &self.rows[x]
    }

    pub fn diagonal(&self, x: usize) -> f64 {
        self.entry(x, x).re
    }

    /// Smallest `k` with `⟨x|H|y⟩ = 0` whenever `d(x, y) > k`.
    pub fn locality(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&(y, _)| (x ^ y).count_ones() as usize))
            .max()
            .unwrap_or(0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(x, row)| row.iter().all(|&(y, _)| y == x))
    }

    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|&(y, h)| h * v[y]).sum();
        }
    }

    /// Bit string minimizing `⟨x|H|x⟩` (first in index order on ties).
    pub fn diag_min(&self) -> BitString {
        let best = (0..self.dim())
            .min_by(|&a, &b| self.diagonal(a).total_cmp(&self.diagonal(b)))
            .unwrap_or(0);
        BitString::from_index(best, self.n)
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.dim())
            .map(|x| self.diagonal(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Parses the Hamiltonian text format, resolving `matrix-file` paths
    /// relative to `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match (toks.as_slice(), n) {
                (["qubits", k], None) => {
                    n = Some(
                        k.parse()
                            .map_err(|_| parse_err(lineno, "invalid qubit count"))?,
                    )
                }
                (_, None) => return Err(parse_err(lineno, "expected `qubits N`")),
                (["term", c, word], Some(nq)) => {
                    let coeff = parse_complex(c).map_err(|m| parse_err(lineno, m))?;
                    if word.chars().count() != nq {
                        return Err(parse_err(
                            lineno,
                            format!("Pauli word must have length {nq}"),
                        ));
                    }
                    if let Some(bad) = word.chars().find(|c| !"IXYZ".contains(*c)) {
                        return Err(parse_err(lineno, format!("invalid Pauli letter {bad:?}")));
                    }
                    terms.push(PauliTerm::new(coeff, word));
                }
                (["matrix-file", path], Some(nq)) => {
                    let full = base.map(|b| b.join(path)).unwrap_or_else(|| path.into());
                    let body = std::fs::read_to_string(&full)
                        .map_err(|e| parse_err(lineno, format!("{}: {e}", full.display())))?;
                    entries.extend(
                        parse_entries(&body, nq).map_err(|e| {
                            parse_err(lineno, format!("in {}: {e}", full.display()))
                        })?,
                    );
                }
                _ => {
                    return Err(parse_err(
                        lineno,
                        "expected `term <re,im> <word>` or `matrix-file <path>`",
                    ))
                }
            }
        }
        let n = n.ok_or_else(|| parse_err(0, "missing `qubits N` header"))?;
        if entries.is_empty() {
            return Self::from_terms(n, terms);
        }
        let from_terms = Self::from_terms(n, terms)?;
        for (x, row) in from_terms.rows.iter().enumerate() {
            for &(y, v) in row {
                entries.push((BitString::from_index(x, n), BitString::from_index(y, n), v));
            }
        }
        let mut h = Self::from_entries(n, &entries)?;
        h.terms = from_terms.terms;
        Ok(h)
    }

    pub fn parse_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent())
    }
}

/// Parses explicit sparse entries `x y re im`.
pub fn parse_entries(text: &str, n: usize) -> Result<Vec<(BitString, BitString, Complex64)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [x, y, re, im] = toks.as_slice() else {
            return Err(parse_err(i + 1, "expected `x y re im`"));
        };
        let bits = |s: &str| -> Result<BitString> {
            let b: BitString = s
                .parse()
                .map_err(|e: Error| parse_err(i + 1, e.to_string()))?;
            if b.len() != n {
                return Err(parse_err(i + 1, format!("bit string must have length {n}")));
            }
            Ok(b)
        };
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| parse_err(i + 1, format!("invalid number `{s}`")))
        };
        out.push((bits(x)?, bits(y)?, Complex64::new(num(re)?, num(im)?)));
    }
    Ok(out)
}
