use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Exact probabilities over the `2^n` basis outcomes, indexed by
/// [`BitString::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    /// Accepts small negative rounding noise, which is clamped to zero.
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << n {
            return Err(Error::invalid(format!(
                "{} probabilities given for {n} qubits",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < -1e-9) {
            return Err(Error::invalid(
                "probabilities must be finite and non-negative",
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("probabilities sum to {total}")));
        }
        let probs = probs.into_iter().map(|p| p.max(0.0)).collect();
        Ok(Self { n, probs })
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, x: &BitString) -> f64 {
        assert_eq!(x.len(), self.n);
        self.probs[x.index() as usize]
    }

    /// Probability mass at each Hamming distance `0..=n` from `target`.
    pub fn hamming_weights(&self, target: &BitString) -> Vec<f64> {
        assert_eq!(target.len(), self.n);
        let t = target.index() as usize;
        let mut out = vec![0.0; self.n + 1];
        for (x, p) in self.probs.iter().enumerate() {
            out[(x ^ t).count_ones() as usize] += p;
        }
        out
    }
}

/// Measured counts for one circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub circuit_id: String,
    pub counts: BTreeMap<BitString, u64>,
    pub shots: u64,
}

impl ShotRecord {
    pub fn width(&self) -> Option<usize> {
        self.counts.keys().next().map(|b| b.len())
    }

    /// Counts at each Hamming distance `0..=n` from `target`.
    pub fn hamming_counts(&self, target: &BitString) -> Result<Vec<u64>> {
        let mut out = vec![0; target.len() + 1];
        for (x, &k) in &self.counts {
            if x.len() != target.len() {
                return Err(Error::WidthMismatch {
                    left: x.len(),
                    right: target.len(),
                });
            }
            out[x.hamming_distance(target)] += k;
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let total: u64 = self.counts.values().sum();
        if total != self.shots {
            return Err(Error::Data(format!(
                "record {}: counts sum to {total}, expected {} shots",
                self.circuit_id, self.shots
            )));
        }
        if let Some(n) = self.width() {
            if self.counts.keys().any(|b| b.len() != n) {
                return Err(Error::Data(format!(
                    "record {}: outcomes have mixed widths",
                    self.circuit_id
                )));
            }
        }
        Ok(())
    }
}

/// Draws `shots` independent outcomes from `dist`.
pub fn sample_shots<R: Rng + ?Sized>(
    dist: &OutcomeDistribution,
    shots: u64,
    circuit_id: impl Into<String>,
    rng: &mut R,
) -> ShotRecord {
    let sampler = WeightedIndex::new(&dist.probs).expect("distribution has positive mass");
    let mut tally = vec![0u64; dist.probs.len()];
    for _ in 0..shots {
        tally[sampler.sample(rng)] += 1;
    }
    let counts = tally
        .into_iter()
        .enumerate()
        .filter(|(_, k)| *k > 0)
        .map(|(x, k)| {
            (
                BitString::from_index(dist.n, x as u64).expect("index fits"),
                k,
            )
        })
        .collect();
    ShotRecord {
        circuit_id: circuit_id.into(),
        counts,
        shots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn hamming_weights_sum_to_one() {
        let d = OutcomeDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let t: BitString = "01".parse().unwrap();
        let h = d.hamming_weights(&t);
        assert!((h[0] - 0.2).abs() < 1e-15);
        assert!((h[1] - 0.5).abs() < 1e-15);
        assert!((h[2] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(OutcomeDistribution::new(1, vec![0.5]).is_err());
        assert!(OutcomeDistribution::new(1, vec![0.7, 0.7]).is_err());
        assert!(OutcomeDistribution::new(1, vec![1.1, -0.1]).is_err());
    }

    #[test]
    fn shots_follow_distribution() {
        let d = OutcomeDistribution::new(1, vec![0.25, 0.75]).unwrap();
        let mut rng = rng_from_seed(9);
        let r = sample_shots(&d, 20_000, "c0", &mut rng);
        r.validate().unwrap();
        let ones = r.counts[&"1".parse().unwrap()] as f64 / 20_000.0;
        assert!((ones - 0.75).abs() < 0.02);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<ShotRecord>(&json).unwrap(), r);
    }
}
