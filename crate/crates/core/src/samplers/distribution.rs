use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::bits::BitString;

/// Sparse probability law over `n`-bit strings.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    n: usize,
    probs: BTreeMap<u64, f64>,
}

/// `l1 = Σ|p − q|` and `tv = l1 / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distances {
    pub l1: f64,
    pub tv: f64,
}

impl Distribution {
    pub fn new(n: usize) -> Self {
        Distribution {
            n,
            probs: BTreeMap::new(),
        }
    }

    pub fn point(x: BitString) -> Self {
        let mut d = Self::new(x.len());
        d.add(x, 1.0);
        d
    }

    /// Dense vector indexed by `BitString::index`; exact zeros are dropped.
    pub fn from_dense(n: usize, probs: &[f64]) -> Self {
        assert_eq!(probs.len(), 1usize << n);
        let mut d = Self::new(n);
        for (i, &p) in probs.iter().enumerate() {
            if p != 0.0 {
                d.probs.insert(i as u64, p);
            }
        }
        d
    }

    /// Born-rule law `|ψ(x)|²` of a (not necessarily normalized) state.
    pub fn from_amplitudes(n: usize, amps: &[Complex64]) -> Self {
        let p: Vec<f64> = amps.iter().map(Complex64::norm_sqr).collect();
        Self::from_dense(n, &p)
    }

    /// Empirical law of a sample list.
    pub fn from_samples<'a>(n: usize, samples: impl IntoIterator<Item = &'a BitString>) -> Self {
        let mut counts: BTreeMap<u64, f64> = BTreeMap::new();
        let mut total = 0.0;
        for s in samples {
            debug_assert_eq!(s.len(), n);
            *counts.entry(s.bits()).or_default() += 1.0;
            total += 1.0;
        }
        counts.values_mut().for_each(|c| *c /= total);
        Distribution { n, probs: counts }
    }

    pub fn num_bits(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: BitString) -> f64 {
        self.probs.get(&x.bits()).copied().unwrap_or(0.0)
    }

    pub fn add(&mut self, x: BitString, p: f64) {
        debug_assert_eq!(x.len(), self.n);
        *self.probs.entry(x.bits()).or_default() += p;
    }

    pub fn iter(&self) -> impl Iterator<Item = (BitString, f64)> + '_ {
        self.probs
            .iter()
            .map(move |(&b, &p)| (BitString::from_bits(b, self.n), p))
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Number of strings with strictly positive probability.
    pub fn support_len(&self) -> usize {
        self.probs.values().filter(|&&p| p > 0.0).count()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1usize << self.n];
        for (&b, &p) in &self.probs {
            out[b as usize] = p;
        }
        out
    }

    pub fn distance(&self, other: &Distribution) -> Distances {
        tv_distance(self, other)
    }
}

pub fn tv_distance(p: &Distribution, q: &Distribution) -> Distances {
    assert_eq!(p.n, q.n, "distributions over different lengths");
    let mut l1 = 0.0;
    for (b, &a) in &p.probs {
        l1 += (a - q.probs.get(b).copied().unwrap_or(0.0)).abs();
    }
    for (b, &a) in &q.probs {
        if !p.probs.contains_key(b) {
            l1 += a.abs();
        }
    }
    Distances { l1, tv: l1 / 2.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn distances() {
        let p = Distribution::from_dense(1, &[0.6, 0.4]);
        let q = Distribution::from_dense(1, &[0.5, 0.5]);
        assert!((tv_distance(&p, &q).l1 - 0.2).abs() < 1e-15);
        assert_eq!(tv_distance(&p, &p).l1, 0.0);
        let d = tv_distance(
            &Distribution::point(bs("01")),
            &Distribution::point(bs("10")),
        );
        assert_eq!((d.l1, d.tv), (2.0, 1.0));
    }

    #[test]
    fn empirical_law() {
        let s = [bs("00"), bs("11"), bs("11"), bs("11")];
        let d = Distribution::from_samples(2, &s);
        assert_eq!(d.get(bs("11")), 0.75);
        assert_eq!(d.support_len(), 2);
    }
}
