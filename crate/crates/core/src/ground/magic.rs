use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_complex::Complex64;

use super::analysis::sensitivity;
use super::chain::{GroundStateOracle, SUPPORT_TOL};
use super::eigen::lowest_two;
use super::SparseHamiltonian;
use crate::bits::BitString;
use crate::circuit::parse::parse_complex;
use crate::error::{parse_err, Error, Result};

pub const MAGIC_NORM_TOL: f64 = 1e-10;
pub const MAGIC_VERIFY_MAX_QUBITS: usize = 12;
/// Amplitudes of a family state at most this modulus count as zero.
const AMPLITUDE_TOL: f64 = 1e-14;

/// Sparse amplitude map of one projector state `φ_{a,j}`.
pub type SparseState = BTreeMap<u64, Complex64>;

/// `H = −Σ_a Σ_j |φ_{a,j}⟩⟨φ_{a,j}|` with the states of each family on
/// disjoint supports.
#[derive(Clone, Debug)]
pub struct MagicRatioHamiltonian {
    n: usize,
    families: Vec<Vec<SparseState>>,
    /// Per family: basis index to the position of the state containing it.
    lookup: Vec<HashMap<u64, usize>>,
}

impl MagicRatioHamiltonian {
    pub fn new(n: usize, families: Vec<Vec<SparseState>>) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidArgument(format!("{n} qubits exceed 64")));
        }
        let mask = crate::bits::low_mask(n);
        let mut lookup = Vec::with_capacity(families.len());
        for fam in &families {
            let mut map = HashMap::new();
            for (j, phi) in fam.iter().enumerate() {
                for (&x, a) in phi {
                    if x & !mask != 0 {
                        return Err(Error::InvalidArgument(format!(
                            "basis index {x} does not fit in {n} qubits"
                        )));
                    }
                    if a.norm() > AMPLITUDE_TOL {
                        map.entry(x).or_insert(j);
                    }
                }
            }
            lookup.push(map);
        }
        Ok(MagicRatioHamiltonian {
            n,
            families,
            lookup,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn families(&self) -> &[Vec<SparseState>] {
        &self.families
    }

    pub fn num_families(&self) -> usize {
        self.families.len()
    }

    fn amp(&self, a: usize, j: usize, x: u64) -> Complex64 {
        self.families[a][j].get(&x).copied().unwrap_or_default()
    }

    /// First family `a` and state `j` whose support contains both strings.
    pub fn connecting_state(&self, x: BitString, y: BitString) -> Option<(usize, usize)> {
        self.lookup.iter().enumerate().find_map(|(a, map)| {
            let j = *map.get(&x.bits())?;
            (self.amp(a, j, y.bits()).norm() > AMPLITUDE_TOL).then_some((a, j))
        })
    }

    /// Explicit matrix of `H`.
    pub fn to_sparse(&self) -> Result<SparseHamiltonian> {
        let mut entries = Vec::new();
        for fam in &self.families {
            for phi in fam {
                for (&x, ax) in phi {
                    for (&y, ay) in phi {
                        entries.push((
                            BitString::from_bits(x, self.n),
                            BitString::from_bits(y, self.n),
                            -ax * ay.conj(),
                        ));
                    }
                }
            }
        }
        SparseHamiltonian::from_entries(self.n, &entries)
    }

    /// Parses `qubits N`, then `family` blocks of
    /// `state <bits> <re,im> [<bits> <re,im> ...]` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut families: Vec<Vec<SparseState>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match (toks[0], n) {
                ("qubits", None) if toks.len() == 2 => {
                    n = Some(
                        toks[1]
                            .parse()
                            .map_err(|_| parse_err(lineno, "invalid qubit count"))?,
                    )
                }
                (_, None) => return Err(parse_err(lineno, "expected `qubits N`")),
                ("family", Some(_)) if toks.len() == 1 => families.push(Vec::new()),
                ("state", Some(nq)) => {
                    let fam = families
                        .last_mut()
                        .ok_or_else(|| parse_err(lineno, "`state` before any `family`"))?;
                    let rest = &toks[1..];
                    if rest.is_empty() || !rest.len().is_multiple_of(2) {
                        return Err(parse_err(lineno, "expected `state <bits> <re,im> ...`"));
                    }
                    let mut phi = SparseState::new();
                    for pair in rest.chunks(2) {
                        let b: BitString = pair[0]
                            .parse()
                            .map_err(|e: Error| parse_err(lineno, e.to_string()))?;
                        if b.len() != nq {
                            return Err(parse_err(
                                lineno,
                                format!("bit string must have length {nq}"),
                            ));
                        }
                        let c = parse_complex(pair[1]).map_err(|m| parse_err(lineno, m))?;
                        *phi.entry(b.bits()).or_default() += c;
                    }
                    fam.push(phi);
                }
                _ => return Err(parse_err(lineno, "expected `family` or `state ...`")),
            }
        }
        let n = n.ok_or_else(|| parse_err(0, "missing `qubits N` header"))?;
        Self::new(n, families)
    }

    pub fn parse_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n);
        for fam in &self.families {
            out.push_str("family\n");
            for phi in fam {
                out.push_str("state");
                for (&x, a) in phi {
                    out.push_str(&format!(
                        " {} {:e},{:e}",
                        BitString::from_bits(x, self.n),
                        a.re,
                        a.im
                    ));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// `|⟨y|φ_{a,j}⟩ / ⟨x|φ_{a,j}⟩|²` for the first family state containing
/// both strings, which equals `π(y)/π(x)` for a frustration-free ground
/// state with `π(x) > 0`.
pub fn magic_ratio(hm: &MagicRatioHamiltonian, x: BitString, y: BitString) -> Result<f64> {
    if x == y {
        return Ok(1.0);
    }
    let (a, j) = hm
        .connecting_state(x, y)
        .ok_or_else(|| Error::NoConnectingFamily {
            x: x.to_string(),
            y: y.to_string(),
        })?;
    let ax = hm.amp(a, j, x.bits());
    let ay = hm.amp(a, j, y.bits());
    Ok(ay.norm_sqr() / ax.norm_sqr())
}

/// Ratio oracle for a magic-ratio Hamiltonian. Pairs joined by a family
/// state get the local ratio; other pairs get 0, so the chain only moves
/// along connections of `H`, which preserves detailed balance.
#[derive(Clone, Debug)]
pub struct MagicRatioOracle {
    hm: MagicRatioHamiltonian,
}

impl MagicRatioOracle {
    pub fn new(hm: MagicRatioHamiltonian) -> Self {
        MagicRatioOracle { hm }
    }

    pub fn hamiltonian(&self) -> &MagicRatioHamiltonian {
        &self.hm
    }
}

impl GroundStateOracle for MagicRatioOracle {
    fn num_qubits(&self) -> usize {
        self.hm.n
    }

    /// Necessary condition from `P_a ψ = ψ`: every family covers `x`.
    fn in_support(&self, x: BitString) -> Result<bool> {
        Ok(self.hm.lookup.iter().all(|m| m.contains_key(&x.bits())))
    }

    fn ratio(&self, x: BitString, y: BitString) -> Result<f64> {
        match magic_ratio(&self.hm, x, y) {
            Err(Error::NoConnectingFamily { .. }) => Ok(0.0),
            r => r,
        }
    }
}

/// Structural checks on a small magic-ratio Hamiltonian.
#[derive(Clone, Debug)]
pub struct MagicReport {
    pub disjoint: bool,
    pub normalized: bool,
    /// `P_a ψ = ψ` within 1e-8 for every family.
    pub frustration_free: bool,
    pub e0: f64,
    pub gap: f64,
    pub unique_ground_state: bool,
    pub s: f64,
    pub m: usize,
    pub s_le_m: bool,
    /// Largest deviation of `magic_ratio` from eigensolve ratios over
    /// connected pairs with `π(x) > 0`.
    pub max_ratio_error: f64,
    /// Connected pairs with `π(x) = 0` where `π(y) ≠ 0`.
    pub zero_support_violations: usize,
}

impl MagicReport {
    pub fn passes(&self) -> bool {
        self.disjoint
            && self.normalized
            && self.frustration_free
            && self.unique_ground_state
            && self.s_le_m
            && self.max_ratio_error <= 1e-8
            && self.zero_support_violations == 0
    }
}

pub fn verify_magic_ratio_structure(hm: &MagicRatioHamiltonian) -> Result<MagicReport> {
    crate::statevector::guard(hm.n, MAGIC_VERIFY_MAX_QUBITS)?;
    let disjoint = hm.families.iter().all(|fam| {
        let total: usize = fam
            .iter()
            .map(|phi| phi.values().filter(|a| a.norm() > AMPLITUDE_TOL).count())
            .sum();
        let mut seen = std::collections::HashSet::new();
        fam.iter()
            .flat_map(|phi| {
                phi.iter()
                    .filter(|(_, a)| a.norm() > AMPLITUDE_TOL)
                    .map(|(x, _)| *x)
            })
            .all(|x| seen.insert(x))
            && seen.len() == total
    });
    let normalized = hm.families.iter().flatten().all(|phi| {
        let norm: f64 = phi.values().map(Complex64::norm_sqr).sum();
        (norm - 1.0).abs() <= MAGIC_NORM_TOL
    });
    let h = hm.to_sparse()?;
    let g = lowest_two(&h)?;
    let psi = &g.psi;
    let frustration_free = (0..hm.families.len()).all(|a| {
        let mut projected = vec![Complex64::new(0.0, 0.0); psi.len()];
        for phi in &hm.families[a] {
            let overlap: Complex64 = phi.iter().map(|(&x, c)| c.conj() * psi[x as usize]).sum();
            for (&x, c) in phi {
                projected[x as usize] += c * overlap;
            }
        }
        projected
            .iter()
            .zip(psi)
            .all(|(p, q)| (p - q).norm() <= 1e-8)
    });
    let s = sensitivity(&h, psi).unwrap_or(0.0);
    let m = hm.families.len();
    let mut max_ratio_error = 0.0f64;
    let mut zero_support_violations = 0;
    let pi: Vec<f64> = psi.iter().map(Complex64::norm_sqr).collect();
    for fam in &hm.families {
        for phi in fam {
            for &x in phi.keys() {
                for &y in phi.keys() {
                    if x == y {
                        continue;
                    }
                    let (bx, by) = (BitString::from_bits(x, hm.n), BitString::from_bits(y, hm.n));
                    if pi[x as usize] > SUPPORT_TOL {
                        let exact = pi[y as usize] / pi[x as usize];
                        if let Ok(r) = magic_ratio(hm, bx, by) {
                            max_ratio_error =
                                max_ratio_error.max((r - exact).abs() / exact.max(1.0));
                        }
                    } else if pi[y as usize] > SUPPORT_TOL {
                        zero_support_violations += 1;
                    }
                }
            }
        }
    }
    Ok(MagicReport {
        disjoint,
        normalized,
        frustration_free,
        e0: g.e0,
        gap: g.gap,
        unique_ground_state: g.gap >= super::eigen::DEGENERACY_TOL,
        s,
        m,
        s_le_m: s <= m as f64 + 1e-9,
        max_ratio_error,
        zero_support_violations,
    })
}
