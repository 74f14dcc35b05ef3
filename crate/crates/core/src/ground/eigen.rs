use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::SparseHamiltonian;
use crate::error::{Error, Result};
use crate::rng;

/// Ground spaces with gap below this are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;
const DENSE_MAX_DIM: usize = 1024;
const LANCZOS_MAX_ITERS: usize = 300;
const LANCZOS_TOL: f64 = 1e-11;

/// Lowest part of the spectrum of `H`.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    /// Ground vector with its largest component real and positive.
    pub psi: Vec<Complex64>,
}

impl GroundState {
    pub fn probabilities(&self) -> Vec<f64> {
        self.psi.iter().map(Complex64::norm_sqr).collect()
    }
}

/// Two lowest eigenvalues and a ground vector, without a degeneracy check.
pub fn lowest_two(h: &SparseHamiltonian) -> Result<GroundState> {
    let (e0, e1, mut psi) = if h.dim() <= DENSE_MAX_DIM {
        dense(h)
    } else {
        let (e0, v0) = lanczos(h, None)?;
        let (e1, _) = lanczos(h, Some(&v0))?;
        (e0, e1, v0)
    };
    fix_phase(&mut psi);
    Ok(GroundState {
        e0,
        e1,
        gap: e1 - e0,
        psi,
    })
}

/// Unique ground state of `H`; degenerate ground spaces are an error.
pub fn exact_ground_state(h: &SparseHamiltonian) -> Result<GroundState> {
    let g = lowest_two(h)?;
    if g.gap < DEGENERACY_TOL {
        return Err(Error::DegenerateGroundState { gap: g.gap });
    }
    Ok(g)
}

fn fix_phase(psi: &mut [Complex64]) {
    let big = psi
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    if big.norm() > 0.0 {
        let phase = big.conj() / big.norm();
        psi.iter_mut().for_each(|a| *a *= phase);
    }
}

fn dense(h: &SparseHamiltonian) -> (f64, f64, Vec<Complex64>) {
    let dim = h.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for x in 0..dim {
        for &(y, v) in h.row(x) {
            m[(x, y)] = v;
        }
    }
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let e1 = if dim > 1 {
        eig.eigenvalues[order[1]]
    } else {
        f64::INFINITY
    };
    let psi = eig.eigenvectors.column(order[0]).iter().copied().collect();
    (e0, e1, psi)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = dot(v, v).re.sqrt();
    v.iter_mut().for_each(|a| *a /= n);
    n
}

fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, v);
            v.iter_mut().zip(b).for_each(|(a, bb)| *a -= c * bb);
        }
    }
}

/// Lowest eigenpair by Lanczos with full reorthogonalization, restricted
/// to the orthogonal complement of `deflate`.
fn lanczos(h: &SparseHamiltonian, deflate: Option<&[Complex64]>) -> Result<(f64, Vec<Complex64>)> {
    let dim = h.dim();
    let deflation: Vec<Vec<Complex64>> = deflate.map(|d| vec![d.to_vec()]).unwrap_or_default();
    let mut g = rng::seeded(0x01a2_c205);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(g.sample(StandardNormal), g.sample(StandardNormal)))
        .collect();
    project_out(&mut v, &deflation);
    normalize(&mut v);
    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let iters = LANCZOS_MAX_ITERS.min(dim);
    let mut result = None;
    for j in 0..iters {
        h.apply(&basis[j], &mut w);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        project_out(&mut w, &deflation);
        project_out(&mut w, &basis);
        let b = dot(&w, &w).re.sqrt();
        let (theta, y) = tridiagonal_lowest(&alpha, &beta);
        let residual = b * y[j].abs();
        if residual < LANCZOS_TOL || b < 1e-14 || j + 1 == iters {
            result = Some((theta, y));
            break;
        }
        beta.push(b);
        let next: Vec<Complex64> = w.iter().map(|x| x / b).collect();
        basis.push(next);
    }
    let (theta, y) = result.expect("loop sets the result");
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    for (coef, b) in y.iter().zip(&basis) {
        psi.iter_mut().zip(b).for_each(|(p, bb)| *p += bb * *coef);
    }
    normalize(&mut psi);
    Ok((theta, psi))
}

fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = t.symmetric_eigen();
    let i = eig.eigenvalues.imin();
    let y: DVector<f64> = eig.eigenvectors.column(i).into();
    (eig.eigenvalues[i], y.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::PauliTerm;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn minus_x() {
        let h = SparseHamiltonian::from_terms(1, vec![PauliTerm::new(-1.0, "X")]).unwrap();
        let g = exact_ground_state(&h).unwrap();
        assert!((g.e0 + 1.0).abs() < 1e-12);
        assert!((g.gap - 2.0).abs() < 1e-12);
        for a in &g.psi {
            assert!((a - FRAC_1_SQRT_2).norm() < 1e-12);
        }
    }

    #[test]
    fn plus_z() {
        let h = SparseHamiltonian::from_terms(1, vec![PauliTerm::new(1.0, "Z")]).unwrap();
        let g = exact_ground_state(&h).unwrap();
        assert!((g.e0 + 1.0).abs() < 1e-12);
        assert!((g.psi[1] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn degenerate_is_rejected() {
        let h = SparseHamiltonian::from_terms(2, vec![PauliTerm::new(1.0, "ZI")]).unwrap();
        assert!(matches!(
            exact_ground_state(&h),
            Err(Error::DegenerateGroundState { .. })
        ));
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let mut terms = Vec::new();
        let n = 6;
        for i in 0..n {
            let mut w = vec!['I'; n];
            w[i] = 'X';
            terms.push(PauliTerm::new(-0.7, &w.iter().collect::<String>()));
            let mut w = vec!['I'; n];
            w[i] = 'Z';
            w[(i + 1) % n] = 'Z';
            terms.push(PauliTerm::new(-1.0, &w.iter().collect::<String>()));
        }
        let h = SparseHamiltonian::from_terms(n, terms).unwrap();
        let (e0, e1, _) = dense(&h);
        let (l0, v0) = lanczos(&h, None).unwrap();
        let (l1, _) = lanczos(&h, Some(&v0)).unwrap();
        assert!((e0 - l0).abs() < 1e-9);
        assert!((e1 - l1).abs() < 1e-9);
    }
}
