use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

use crate::circuit::{Circuit, Gate, GateClass, GateKind};
use crate::error::{Error, Result};

/// Optimal allocation of prefix errors `ε_t` for an approximate sampler
/// whose per-prefix cost is `η_t / ε_t²`, `η_t = Π_{s≤t} ξ_s`.
#[derive(Clone, Debug)]
pub struct ErrorBudget {
    /// `ξ(U_t)` for `t = 1..=m`.
    pub xi: Vec<f64>,
    /// `η_t` for `t = 1..m−1`.
    pub eta: Vec<f64>,
    /// `ε_t` for `t = 1..m−1`.
    pub eps: Vec<f64>,
    pub delta: f64,
    /// `Σ_t η_t / ε_t²`, in units of stabilizer amplitude evaluations
    /// (the `n²` per-evaluation factor is not included).
    pub cost: f64,
    /// `(256/δ²)(Σ_t η_t^{1/3})³`; equal to `cost` at the optimum.
    pub closed_form: f64,
    /// `(256/δ²) Π_{t<m} ξ_t`, the last-term approximation.
    pub last_term: f64,
}

impl ErrorBudget {
    /// `Σ_t η_t / ε_t²` for an arbitrary allocation.
    pub fn cost_of(&self, eps: &[f64]) -> f64 {
        self.eta.iter().zip(eps).map(|(e, x)| e / (x * x)).sum()
    }

    pub fn eps_sum(&self) -> f64 {
        self.eps.iter().sum()
    }
}

/// `ξ` of `e^{-iθZ/2}` for `θ ∈ [0, π/2]`.
pub fn xi_rz(theta: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidArgument(format!(
            "rotation angle {theta} outside [0, pi/2]"
        )));
    }
    let v = (theta / 2.0).cos() + FRAC_PI_8.tan() * (theta / 2.0).sin();
    Ok(v * v)
}

/// `ξ` of a gate: 1 for Clifford gates, the rotation formula for Z
/// rotations (angles reduced modulo the Clifford rotation `π/2`), including
/// T, T† and single-qubit diagonal matrices.
pub fn gate_xi(g: &Gate) -> Result<f64> {
    let theta = match g.kind() {
        k if k.is_clifford() => return Ok(1.0),
        GateKind::T => std::f64::consts::FRAC_PI_4,
        GateKind::Tdg => -std::f64::consts::FRAC_PI_4,
        GateKind::Rz(theta) => theta,
        GateKind::Matrix if g.arity() == 1 && g.class() == GateClass::Diagonal => {
            (g.entry(1, 1) / g.entry(0, 0)).arg()
        }
        _ => {
            return Err(Error::UnsupportedGate(format!(
                "no stabilizer extent known for {}",
                g.label()
            )))
        }
    };
    let reduced = theta.rem_euclid(FRAC_PI_2);
    xi_rz(reduced.min(FRAC_PI_2))
}

pub fn circuit_xi(c: &Circuit) -> Result<Vec<f64>> {
    if c.is_adaptive() {
        return Err(Error::InvalidArgument(
            "budget allocation requires a non-adaptive circuit".into(),
        ));
    }
    c.gates().iter().map(gate_xi).collect()
}

/// `ε_t = (δ/16) η_t^{1/3} / Σ_s η_s^{1/3}` for `t = 1..m−1`.
pub fn allocate_error_budget(xi: &[f64], delta: f64) -> Result<ErrorBudget> {
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(Error::InvalidArgument(format!(
            "delta {delta} outside (0, 2]"
        )));
    }
    if let Some(x) = xi.iter().find(|&&x| !(x >= 1.0 && x.is_finite())) {
        return Err(Error::InvalidArgument(format!("xi value {x} is below 1")));
    }
    if xi.len() < 2 {
        return Err(Error::InvalidArgument(
            "at least two gates are needed to distribute the error budget".into(),
        ));
    }
    let m = xi.len();
    let eta: Vec<f64> = xi[..m - 1]
        .iter()
        .scan(1.0, |acc, &x| {
            *acc *= x;
            Some(*acc)
        })
        .collect();
    let cube_roots: Vec<f64> = eta.iter().map(|e| e.cbrt()).collect();
    let s: f64 = cube_roots.iter().sum();
    let eps: Vec<f64> = cube_roots.iter().map(|r| delta / 16.0 * r / s).collect();
    let mut budget = ErrorBudget {
        xi: xi.to_vec(),
        eps,
        delta,
        cost: 0.0,
        closed_form: 256.0 / (delta * delta) * s.powi(3),
        last_term: 256.0 / (delta * delta) * eta[m - 2],
        eta,
    };
    budget.cost = budget.cost_of(&budget.eps);
    Ok(budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn clifford_budget_is_uniform() {
        let b = allocate_error_budget(&[1.0; 6], 0.1).unwrap();
        for e in &b.eps {
            assert!((e - 0.1 / (16.0 * 5.0)).abs() < 1e-15);
        }
        assert!((b.eps_sum() - 0.1 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_xi() {
        assert_eq!(xi_rz(0.0).unwrap(), 1.0);
        let v = (FRAC_PI_8.cos() + FRAC_PI_8.tan() * FRAC_PI_8.sin()).powi(2);
        assert!((xi_rz(FRAC_PI_4).unwrap() - v).abs() < 1e-15);
        assert!((gate_xi(&Gate::t(0)).unwrap() - v).abs() < 1e-15);
        assert!((gate_xi(&Gate::tdg(0)).unwrap() - v).abs() < 1e-15);
        assert_eq!(gate_xi(&Gate::h(0)).unwrap(), 1.0);
        assert!(xi_rz(2.0).is_err());
        assert!(gate_xi(&Gate::rz(0, 0.0)).unwrap() == 1.0);
    }

    #[test]
    fn closed_form_matches_optimum() {
        let b = allocate_error_budget(&[1.2, 1.0, 1.7, 1.1, 2.0], 0.05).unwrap();
        assert!((b.cost - b.closed_form).abs() / b.cost < 1e-12);
    }

    #[test]
    fn argument_checks() {
        assert!(allocate_error_budget(&[1.0, 0.5], 0.1).is_err());
        assert!(allocate_error_budget(&[1.0, 1.0], 0.0).is_err());
        assert!(allocate_error_budget(&[1.0, 1.0], 2.5).is_err());
        assert!(allocate_error_budget(&[1.0], 0.1).is_err());
    }
}
