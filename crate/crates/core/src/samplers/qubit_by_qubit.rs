use rand::Rng;

use super::Distribution;
use crate::backends::AmplitudeOracle;
use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::statevector::guard;

fn prefix_of(x: BitString, j: usize) -> BitString {
    BitString::from_bits(x.bits() & crate::bits::low_mask(j), j)
}

fn check(c: &Circuit, o: &dyn AmplitudeOracle) -> Result<()> {
    if !o.supports_marginals() {
        return Err(Error::MarginalsUnsupported(o.backend()));
    }
    if o.num_qubits() != c.num_qubits() || o.num_gates() != c.len() {
        return Err(Error::InvalidArgument(
            "oracle does not match circuit".into(),
        ));
    }
    Ok(())
}

/// Chain-rule sampling over the marginals of the final state: qubit `j` is
/// drawn from `π_{j+1}(x_0…x_j) / π_j(x_0…x_{j−1})`.
pub fn qubit_by_qubit_sample<R: Rng + ?Sized>(
    c: &Circuit,
    o: &mut dyn AmplitudeOracle,
    rng: &mut R,
) -> Result<BitString> {
    check(c, o)?;
    let (n, m) = (c.num_qubits(), c.len());
    let mut x = BitString::zeros(n);
    let mut pi_prev = o.marginal_probability(m, BitString::zeros(0))?;
    for j in 0..n {
        let p0 = o.marginal_probability(m, prefix_of(x, j + 1))?;
        if rng.random::<f64>() * pi_prev >= p0 {
            x.set(j, true);
            pi_prev -= p0;
        } else {
            pi_prev = p0;
        }
    }
    Ok(x)
}

/// Exact law of [`qubit_by_qubit_sample`], enumerating prefixes.
pub fn qubit_by_qubit_distribution(
    c: &Circuit,
    o: &mut dyn AmplitudeOracle,
) -> Result<Distribution> {
    check(c, o)?;
    guard(c.num_qubits(), super::INDUCED_MAX_QUBITS)?;
    let (n, m) = (c.num_qubits(), c.len());
    let mut frontier = vec![(BitString::zeros(n), 1.0f64)];
    for j in 0..n {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (x, p) in frontier {
            let denom = o.marginal_probability(m, prefix_of(x, j))?;
            let p0 = o.marginal_probability(m, prefix_of(x, j + 1))?;
            let c0 = if denom > 0.0 { p0 / denom } else { 0.0 };
            if c0 > 0.0 {
                next.push((x, p * c0));
            }
            if c0 < 1.0 {
                next.push((x.flipped(j), p * (1.0 - c0)));
            }
        }
        frontier = next;
    }
    let mut d = Distribution::new(n);
    for (x, p) in frontier {
        d.add(x, p);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::{PathSumOracle, StatevectorOracle};
    use crate::circuit::parse_circuit;
    use crate::rng::seeded;

    #[test]
    fn bell_law() {
        let c = parse_circuit("qubits 2\nh 0\ncx 0 1").unwrap();
        let mut o = StatevectorOracle::new(&c).unwrap();
        let d = qubit_by_qubit_distribution(&c, &mut o).unwrap();
        assert!((d.get("00".parse().unwrap()) - 0.5).abs() < 1e-12);
        assert!((d.get("11".parse().unwrap()) - 0.5).abs() < 1e-12);
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_gives_zero_string() {
        let c = parse_circuit("qubits 4\n").unwrap();
        let mut o = StatevectorOracle::new(&c).unwrap();
        let x = qubit_by_qubit_sample(&c, &mut o, &mut seeded(3)).unwrap();
        assert_eq!(x, BitString::zeros(4));
    }

    #[test]
    fn ghz_conditional_is_deterministic() {
        let c = parse_circuit("qubits 3\nh 0\ncx 0 1\ncx 1 2").unwrap();
        let mut o = StatevectorOracle::new(&c).unwrap();
        let p0 = o.marginal_probability(3, "0".parse().unwrap()).unwrap();
        let p00 = o.marginal_probability(3, "00".parse().unwrap()).unwrap();
        assert!((p00 / p0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pathsum_has_no_marginals() {
        let c = parse_circuit("qubits 1\nh 0").unwrap();
        let mut o = PathSumOracle::new(&c);
        assert!(matches!(
            qubit_by_qubit_sample(&c, &mut o, &mut seeded(0)),
            Err(Error::MarginalsUnsupported(_))
        ));
    }
}
