use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::Distribution;
use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Samples falling outside the reference support; any such sample fails
    /// the test outright.
    pub outside_support: usize,
}

impl GofResult {
    pub fn passes(&self, alpha: f64) -> bool {
        self.outside_support == 0 && self.p_value >= alpha
    }
}

/// Pearson chi-square test of `samples` against `reference`.
pub fn chi_square_gof(samples: &[BitString], reference: &Distribution) -> Result<GofResult> {
    let support: Vec<(BitString, f64)> = reference.iter().filter(|(_, p)| *p > 0.0).collect();
    let min_p = support.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let need = (5.0 / min_p).ceil() as usize;
    if support.is_empty() || samples.len() < need {
        return Err(Error::InsufficientSamples {
            have: samples.len(),
            need,
        });
    }
    let observed = Distribution::from_samples(reference.num_bits(), samples);
    let total = samples.len() as f64;
    let outside = samples.iter().filter(|&&s| reference.get(s) <= 0.0).count();
    let statistic = support
        .iter()
        .map(|&(x, p)| {
            let e = p * total;
            let o = observed.get(x) * total;
            (o - e).powi(2) / e
        })
        .sum::<f64>();
    let dof = support.len() - 1;
    let p_value = if outside > 0 {
        0.0
    } else if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(statistic)
    };
    Ok(GofResult {
        statistic,
        dof,
        p_value,
        outside_support: outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draw(p: &[f64], k: usize, seed: u64) -> Vec<BitString> {
        let mut rng = crate::rng::seeded(seed);
        (0..k)
            .map(|_| {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let i = p
                    .iter()
                    .position(|&q| {
                        acc += q;
                        u < acc
                    })
                    .unwrap_or(p.len() - 1);
                BitString::from_index(i, 2)
            })
            .collect()
    }

    #[test]
    fn accepts_own_samples_and_rejects_wrong_ones() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let reference = Distribution::from_dense(2, &p);
        let good = chi_square_gof(&draw(&p, 100_000, 1), &reference).unwrap();
        assert!(good.p_value > 1e-3, "{good:?}");
        let bad = chi_square_gof(&draw(&[0.25; 4], 100_000, 2), &reference).unwrap();
        assert!(bad.p_value < 1e-6);
    }

    #[test]
    fn outside_support_fails() {
        let reference = Distribution::from_dense(2, &[0.5, 0.0, 0.0, 0.5]);
        let mut s = draw(&[0.5, 0.0, 0.0, 0.5], 100, 3);
        s.push(BitString::from_index(1, 2));
        let r = chi_square_gof(&s, &reference).unwrap();
        assert_eq!(r.outside_support, 1);
        assert!(!r.passes(0.0));
    }

    #[test]
    fn too_few_samples() {
        let reference = Distribution::from_dense(1, &[0.99, 0.01]);
        assert!(matches!(
            chi_square_gof(&[BitString::zeros(1); 10], &reference),
            Err(Error::InsufficientSamples { need: 500, .. })
        ));
    }
}
