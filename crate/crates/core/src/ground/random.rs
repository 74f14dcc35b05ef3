use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use super::magic::{MagicRatioHamiltonian, SparseState};
use super::{PauliTerm, SparseHamiltonian};
use crate::error::Result;

fn word(n: usize, letters: &[(usize, char)]) -> String {
    let mut w = vec!['I'; n];
    for &(q, c) in letters {
        w[q] = c;
    }
    w.into_iter().collect()
}

/// `−Σ Z_i Z_{i+1} − g Σ X_i` on an open chain.
pub fn tfim(n: usize, g: f64) -> Result<SparseHamiltonian> {
    let mut terms = Vec::new();
    for i in 0..n.saturating_sub(1) {
        terms.push(PauliTerm::new(-1.0, &word(n, &[(i, 'Z'), (i + 1, 'Z')])));
    }
    for i in 0..n {
        terms.push(PauliTerm::new(-g, &word(n, &[(i, 'X')])));
    }
    SparseHamiltonian::from_terms(n, terms)
}

/// Stoquastic 2-local Hamiltonian: random `Z`, `ZZ` couplings and
/// negative `X`, `XX` couplings on random pairs.
pub fn random_stoquastic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SparseHamiltonian> {
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push(PauliTerm::new(
            rng.random_range(-1.0..1.0),
            &word(n, &[(i, 'Z')]),
        ));
        terms.push(PauliTerm::new(
            -rng.random_range(0.1..1.0),
            &word(n, &[(i, 'X')]),
        ));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.5) {
                terms.push(PauliTerm::new(
                    rng.random_range(-1.0..1.0),
                    &word(n, &[(i, 'Z'), (j, 'Z')]),
                ));
            }
            if rng.random_bool(0.3) {
                terms.push(PauliTerm::new(
                    -rng.random_range(0.0..1.0),
                    &word(n, &[(i, 'X'), (j, 'X')]),
                ));
            }
        }
    }
    SparseHamiltonian::from_terms(n, terms)
}

/// Sum of `terms` Pauli words with support at most `k` and Gaussian real
/// coefficients, plus a transverse field on every qubit so that the
/// off-diagonal graph connects all strings.
pub fn random_k_local<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    terms: usize,
    rng: &mut R,
) -> Result<SparseHamiltonian> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push(PauliTerm::new(
            rng.sample::<f64, _>(StandardNormal),
            &word(n, &[(i, 'X')]),
        ));
    }
    for _ in 0..terms {
        let size = rng.random_range(1..=k.min(n));
        let letters: Vec<(usize, char)> = sample(rng, n, size)
            .into_iter()
            .map(|q| (q, ['X', 'Y', 'Z'][rng.random_range(0..3)]))
            .collect();
        out.push(PauliTerm::new(
            rng.sample::<f64, _>(StandardNormal),
            &word(n, &letters),
        ));
    }
    SparseHamiltonian::from_terms(n, out)
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Restriction of `psi` to each block of strings agreeing outside `flips`,
/// normalized; blocks where `keep` is false or `psi` vanishes are skipped.
fn blocks_of(
    n: usize,
    psi: &[Complex64],
    flips: &[usize],
    keep: impl Fn(u64) -> bool,
) -> Vec<SparseState> {
    let flip_mask: u64 = flips.iter().map(|&q| 1u64 << q).sum();
    let mut out = Vec::new();
    for base in 0..1u64 << n {
        if base & flip_mask != 0 || !keep(base) {
            continue;
        }
        let members: Vec<u64> = (0..1u64 << flips.len())
            .map(|v| {
                flips
                    .iter()
                    .enumerate()
                    .fold(base, |x, (b, &q)| x | (((v >> b) & 1) << q))
            })
            .collect();
        let norm: f64 = members
            .iter()
            .map(|&x| psi[x as usize].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            continue;
        }
        out.push(
            members
                .iter()
                .map(|&x| (x, psi[x as usize] / norm))
                .collect(),
        );
    }
    out
}

/// Random flip sets of size 1 or 2 on `qubits`, then one singleton per
/// uncovered qubit.
fn flip_sets<R: Rng + ?Sized>(qubits: &[usize], families: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = (0..families)
        .map(|_| {
            let size = rng.random_range(1..=2.min(qubits.len()));
            sample(rng, qubits.len(), size)
                .into_iter()
                .map(|i| qubits[i])
                .collect()
        })
        .collect();
    for &q in qubits {
        if !sets.iter().any(|s| s.contains(&q)) {
            sets.push(vec![q]);
        }
    }
    sets
}

/// Frustration-free magic-ratio Hamiltonian whose ground state is a random
/// complex vector of full support. Each family splits the strings into
/// blocks agreeing outside a random 1- or 2-qubit set and projects onto
/// the ground state restricted to each block.
pub fn random_magic<R: Rng + ?Sized>(
    n: usize,
    families: usize,
    rng: &mut R,
) -> Result<(MagicRatioHamiltonian, Vec<Complex64>)> {
    let mut psi: Vec<Complex64> = (0..1usize << n).map(|_| gaussian_complex(rng)).collect();
    normalize(&mut psi);
    let qubits: Vec<usize> = (0..n).collect();
    let fams = flip_sets(&qubits, families, rng)
        .iter()
        .map(|f| blocks_of(n, &psi, f, |_| true))
        .collect();
    Ok((MagicRatioHamiltonian::new(n, fams)?, psi))
}

/// Like [`random_magic`], but the ground state vanishes whenever qubit
/// `n − 1` is 1. The first family also holds random states on blocks of
/// that half, so `H` connects strings outside the support; the other
/// families leave that half empty, which keeps the ground state unique.
pub fn random_magic_zero_support<R: Rng + ?Sized>(
    n: usize,
    families: usize,
    rng: &mut R,
) -> Result<(MagicRatioHamiltonian, Vec<Complex64>)> {
    assert!(n >= 2, "need a spare qubit");
    let top = 1u64 << (n - 1);
    let mut psi: Vec<Complex64> = (0..1u64 << n)
        .map(|x| {
            if x & top == 0 {
                gaussian_complex(rng)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    normalize(&mut psi);
    let noise: Vec<Complex64> = (0..1usize << n).map(|_| gaussian_complex(rng)).collect();
    let qubits: Vec<usize> = (0..n - 1).collect();
    let mut sets = flip_sets(&qubits, families.max(2), rng);
    if sets.len() < 2 {
        sets.push(sets[0].clone());
    }
    let mut fams: Vec<Vec<SparseState>> = sets
        .iter()
        .map(|f| blocks_of(n, &psi, f, |_| true))
        .collect();
    fams[0].extend(blocks_of(n, &noise, &sets[0], |x| x & top != 0));
    Ok((MagicRatioHamiltonian::new(n, fams)?, psi))
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
}
