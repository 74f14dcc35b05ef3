use num_complex::Complex64;

use super::chain::{chain_matrix, ChainConfig, ExactOracle};
use super::eigen::{exact_ground_state, lowest_two};
use super::SparseHamiltonian;
use crate::error::{Error, Result};

/// Amplitudes at most this modulus are excluded from the sensitivity
/// maximum.
pub const SENSITIVITY_AMPLITUDE_TOL: f64 = 1e-12;
pub const STOQUASTIC_TOL: f64 = 1e-12;
pub const GAP_CHECK_MAX_QUBITS: usize = 10;
const GAP_SLACK: f64 = 1e-10;

/// `s = max_{x≠y} |⟨y|H|x⟩ ψ(x)| / |ψ(y)|` over connected pairs with
/// `|ψ(y)| > 1e-12`. Diagonal `H` gives 0.
pub fn sensitivity(h: &SparseHamiltonian, psi: &[Complex64]) -> Result<f64> {
    if psi.len() != h.dim() {
        return Err(Error::InvalidArgument(format!(
            "state has length {}, expected {}",
            psi.len(),
            h.dim()
        )));
    }
    let mut best: Option<f64> = None;
    let mut any_pair = false;
    for y in 0..h.dim() {
        for &(x, hyx) in h.row(y) {
            if x == y {
                continue;
            }
            any_pair = true;
            let py = psi[y].norm();
            if py <= SENSITIVITY_AMPLITUDE_TOL {
                continue;
            }
            let v = (hyx * psi[x]).norm() / py;
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    match (any_pair, best) {
        (false, _) => Ok(0.0),
        (true, Some(s)) => Ok(s),
        (true, None) => Err(Error::InvalidArgument(
            "state vanishes on every string with an off-diagonal connection".into(),
        )),
    }
}

/// Stoquasticity check and the bound `max_x ⟨x|H|x⟩ − E0` on `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct StoquasticReport {
    pub is_stoquastic: bool,
    /// Largest off-diagonal violation (`Re` above the tolerance or a
    /// nonzero imaginary part); 0 when stoquastic.
    pub worst_violation: f64,
    pub max_diagonal: f64,
    pub e0: f64,
    pub bound: f64,
}

pub fn stoquastic_check_and_bound(h: &SparseHamiltonian) -> Result<StoquasticReport> {
    let mut worst = 0.0f64;
    for x in 0..h.dim() {
        for &(y, v) in h.row(x) {
            if x != y {
                let bad = v.re.max(0.0).max(v.im.abs());
                if v.re > STOQUASTIC_TOL || v.im.abs() > STOQUASTIC_TOL {
                    worst = worst.max(bad);
                }
            }
        }
    }
    let e0 = lowest_two(h)?.e0;
    let max_diagonal = h.max_diagonal();
    Ok(StoquasticReport {
        is_stoquastic: worst == 0.0,
        worst_violation: worst,
        max_diagonal,
        e0,
        bound: max_diagonal - e0,
    })
}

/// Spectral quantities of one chain instance and the checks relating them.
#[derive(Clone, Debug)]
pub struct GapReport {
    pub n: usize,
    pub k: usize,
    pub e0: f64,
    pub gamma: f64,
    pub s: f64,
    pub proposal_count: u128,
    pub support_size: usize,
    pub lambda1: f64,
    pub min_eigenvalue: f64,
    pub detailed_balance_residual: f64,
    /// `γ / (2Ns)`.
    pub gap_lower_bound: f64,
    /// `1 − λ₁ ≥ γ/(2Ns) − 1e-10`.
    pub gap_bound_holds: bool,
    pub pi_x_in: f64,
    /// `ln(2ε√π(x_in)) / ln λ₁` (0 when `λ₁ = 0`).
    pub mixing_time: f64,
    /// `n^k s/γ · ln(1/(π(x_in) ε))` with unit constant.
    pub runtime_estimate: f64,
}

/// Computes `γ`, `s`, `N` and `λ₁` exactly and checks `1 − λ₁ ≥ γ/(2Ns)`.
/// The proposal radius must cover the locality of `H`.
pub fn gap_bound_check(h: &SparseHamiltonian, cfg: &ChainConfig) -> Result<GapReport> {
    let n = h.num_qubits();
    crate::statevector::guard(n, GAP_CHECK_MAX_QUBITS)?;
    if cfg.n != n {
        return Err(Error::InvalidArgument(format!(
            "chain is configured for {} qubits, Hamiltonian has {n}",
            cfg.n
        )));
    }
    let loc = h.locality();
    if cfg.k < loc {
        return Err(Error::InvalidArgument(format!(
            "proposal radius {} is below the locality {loc} of H",
            cfg.k
        )));
    }
    let g = exact_ground_state(h)?;
    let s = sensitivity(h, &g.psi)?;
    let oracle = ExactOracle::from_state(n, &g.psi);
    let pi_x_in = oracle.probabilities()[cfg.x_in.index()];
    if pi_x_in <= super::chain::SUPPORT_TOL {
        return Err(Error::OutsideSupport(cfg.x_in.to_string()));
    }
    let support = oracle.support();
    let cm = chain_matrix(&oracle, &support, cfg)?;
    let big_n = cfg.proposal_count();
    let gap_lower_bound = if s > 0.0 {
        g.gap / (2.0 * big_n as f64 * s)
    } else {
        f64::INFINITY
    };
    let lambda1 = cm.lambda1;
    let gap_bound_holds = s == 0.0 || 1.0 - lambda1 >= gap_lower_bound - GAP_SLACK;
    let mixing_time = if lambda1 > 0.0 {
        (2.0 * cfg.epsilon * pi_x_in.sqrt()).ln() / lambda1.ln()
    } else {
        0.0
    };
    let runtime_estimate =
        (n as f64).powi(cfg.k as i32) * s / g.gap * (1.0 / (pi_x_in * cfg.epsilon)).ln();
    Ok(GapReport {
        n,
        k: cfg.k,
        e0: g.e0,
        gamma: g.gap,
        s,
        proposal_count: big_n,
        support_size: cm.states.len(),
        lambda1,
        min_eigenvalue: cm.eigenvalues.last().copied().unwrap_or(1.0),
        detailed_balance_residual: cm.detailed_balance_residual,
        gap_lower_bound,
        gap_bound_holds,
        pi_x_in,
        mixing_time,
        runtime_estimate,
    })
}

/// `ln(2ε√π(x_in)) / ln λ₁`.
pub fn mixing_time(lambda1: f64, pi_x_in: f64, epsilon: f64) -> f64 {
    (2.0 * epsilon * pi_x_in.sqrt()).ln() / lambda1.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::PauliTerm;

    fn ham(n: usize, terms: &[(f64, &str)]) -> SparseHamiltonian {
        SparseHamiltonian::from_terms(
            n,
            terms.iter().map(|&(c, w)| PauliTerm::new(c, w)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn sensitivity_of_minus_x() {
        let h = ham(1, &[(-1.0, "X")]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [Complex64::new(r, 0.0), Complex64::new(r, 0.0)];
        assert!((sensitivity(&h, &psi).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_sensitivity_is_zero() {
        let h = ham(2, &[(1.0, "ZZ"), (0.5, "ZI")]);
        let psi = [Complex64::new(1.0, 0.0), 0.0.into(), 0.0.into(), 0.0.into()];
        assert_eq!(sensitivity(&h, &psi).unwrap(), 0.0);
    }

    #[test]
    fn vacuous_sensitivity_is_an_error() {
        let h = ham(1, &[(-1.0, "X")]);
        let psi = [Complex64::new(0.0, 0.0); 2];
        assert!(sensitivity(&h, &psi).is_err());
    }

    #[test]
    fn stoquastic_examples() {
        let r = stoquastic_check_and_bound(&ham(1, &[(-1.0, "X"), (-1.0, "Z")])).unwrap();
        assert!(r.is_stoquastic);
        assert!((r.bound - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(
            !stoquastic_check_and_bound(&ham(1, &[(1.0, "X")]))
                .unwrap()
                .is_stoquastic
        );
        let d = stoquastic_check_and_bound(&ham(2, &[(1.0, "ZI"), (0.25, "IZ")])).unwrap();
        assert!(d.is_stoquastic);
        assert!((d.bound - 2.5).abs() < 1e-12);
    }

    #[test]
    fn mixing_time_substitution() {
        let t = mixing_time(0.5, 0.25, 0.01);
        assert!((t - 0.01f64.ln() / 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn single_qubit_gap_check() {
        let h = ham(1, &[(-1.0, "X")]);
        let cfg = ChainConfig::new("0".parse().unwrap(), 1, 0, 0);
        let r = gap_bound_check(&h, &cfg).unwrap();
        assert_eq!(r.proposal_count, 2);
        assert!((r.gamma - 2.0).abs() < 1e-10);
        assert!((r.s - 1.0).abs() < 1e-10);
        assert!((r.gap_lower_bound - 0.5).abs() < 1e-10);
        assert!(1.0 - r.lambda1 >= 0.5 - 1e-10);
        assert!(r.gap_bound_holds);
    }
}
