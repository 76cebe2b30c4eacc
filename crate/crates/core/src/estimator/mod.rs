//! Fidelity estimation from mirror-circuit outcomes.

mod bootstrap;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::simulator::{OutcomeDistribution, ShotRecord};

pub use bootstrap::{bootstrap_sd, bootstrap_sd_with, DEFAULT_RESAMPLES, MIN_RESAMPLES};

fn four_pow(n: usize) -> f64 {
    4f64.powi(n as i32)
}

/// Outcome weight at each Hamming distance from the target.
#[derive(Clone, Debug, PartialEq)]
pub struct HammingHistogram {
    h: Vec<f64>,
}

impl HammingHistogram {
    /// `h[k]` for `k = 0..=n`. Entries must be non-negative and sum to one.
    pub fn new(h: Vec<f64>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::EmptyInput("histogram".into()));
        }
        if h.iter().any(|&x| !(x >= -1e-12)) {
            return Err(Error::invalid("histogram entries must be non-negative"));
        }
        let s: f64 = h.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("histogram sums to {s}")));
        }
        Ok(Self { h })
    }

    pub fn from_distribution(d: &OutcomeDistribution, target: &BitString) -> Self {
        Self {
            h: d.hamming_weights(target),
        }
    }

    /// Empirical frequencies of a shot record.
    pub fn from_record(r: &ShotRecord, target: &BitString) -> Result<Self> {
        if r.shots == 0 {
            return Err(Error::EmptyInput("shot record".into()));
        }
        let counts = r.hamming_counts(target)?;
        let k = r.shots as f64;
        Ok(Self {
            h: counts.into_iter().map(|c| c as f64 / k).collect(),
        })
    }

    pub fn width(&self) -> usize {
        self.h.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.h
    }
}

/// `S = Σ_k (−1/2)^k h_k`.
pub fn adjusted_success_probability(hist: &HammingHistogram) -> f64 {
    let mut w = 1.0;
    let mut s = 0.0;
    for &h in &hist.h {
        s += w * h;
        w *= -0.5;
    }
    s
}

/// `γ = (4^n S − 1)/(4^n − 1)`.
pub fn effective_polarization(s: f64, n: usize) -> f64 {
    let d = four_pow(n);
    (d * s - 1.0) / (d - 1.0)
}

fn adjusted_from_polarization(gamma: f64, n: usize) -> f64 {
    let d = four_pow(n);
    ((d - 1.0) * gamma + 1.0) / d
}

/// Effective polarization of a single shot at Hamming distance `h`.
pub fn shot_polarization(h: usize, n: usize) -> f64 {
    effective_polarization((-0.5f64).powi(h as i32), n)
}

pub fn histogram_polarization(hist: &HammingHistogram) -> f64 {
    effective_polarization(adjusted_success_probability(hist), hist.width())
}

/// Sample mean of the per-circuit effective polarizations of one ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaEstimate {
    pub gamma: f64,
    pub per_circuit: Vec<f64>,
}

impl GammaEstimate {
    pub fn from_values(per_circuit: Vec<f64>) -> Result<Self> {
        if per_circuit.is_empty() {
            return Err(Error::EmptyInput("ensemble".into()));
        }
        let gamma = per_circuit.iter().sum::<f64>() / per_circuit.len() as f64;
        Ok(Self { gamma, per_circuit })
    }
}

/// Shot-based estimate. Each circuit contributes the mean of its per-shot
/// values, which is the polarization of its empirical histogram.
pub fn estimate_gamma(records: &[(ShotRecord, BitString)]) -> Result<GammaEstimate> {
    let values = records
        .iter()
        .map(|(r, t)| HammingHistogram::from_record(r, t).map(|h| histogram_polarization(&h)))
        .collect::<Result<Vec<_>>>()?;
    GammaEstimate::from_values(values)
}

/// Exact-distribution estimate (infinitely many shots per circuit).
pub fn estimate_gamma_exact(dists: &[(OutcomeDistribution, BitString)]) -> Result<GammaEstimate> {
    let values = dists
        .iter()
        .map(|(d, t)| histogram_polarization(&HammingHistogram::from_distribution(d, t)))
        .collect();
    GammaEstimate::from_values(values)
}

/// `1 − ((4^n − 1)/4^n)(1 − γ₁/√(γ₂γ₃))`.
pub fn chi_f(g1: f64, g2: f64, g3: f64, n: usize) -> Result<f64> {
    if !(g2 > 0.0 && g3 > 0.0) {
        return Err(Error::EstimateUndefined(format!(
            "reference polarizations must be positive (got {g2:.6}, {g3:.6})"
        )));
    }
    let d = four_pow(n);
    Ok(1.0 - ((d - 1.0) / d) * (1.0 - g1 / (g2 * g3).sqrt()))
}

/// `S₁/√(S₂S₃)`, the cruder estimate, from polarizations.
pub fn success_ratio(g1: f64, g2: f64, g3: f64, n: usize) -> Option<f64> {
    let [s1, s2, s3] = [g1, g2, g3].map(|g| adjusted_from_polarization(g, n));
    (s2 * s3 > 0.0).then(|| s1 / (s2 * s3).sqrt())
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub alpha: f64,
    pub delta: f64,
    pub gamma0: f64,
    pub n_per_ensemble: u64,
}

/// Circuits per ensemble so that `χ̂_F` has relative error at most `2α`
/// with probability at least `(1 − δ)³`, given every `γ ≥ γ0`.
pub fn plan_samples(alpha: f64, delta: f64, gamma0: f64) -> Result<SamplePlan> {
    if !(alpha > 0.0) || !(delta > 0.0 && delta < 1.0) || !(gamma0 > 0.0 && gamma0 <= 1.0) {
        return Err(Error::invalid(format!(
            "need alpha > 0, 0 < delta < 1, 0 < gamma0 <= 1 (got {alpha}, {delta}, {gamma0})"
        )));
    }
    let n = (2.0 * (2.0 / delta).ln() / (alpha * alpha * gamma0 * gamma0)).ceil();
    Ok(SamplePlan {
        alpha,
        delta,
        gamma0,
        n_per_ensemble: n as u64,
    })
}

/// `2 exp(−(8/9)((4^n − 1)/4^n)² ε² N)`, the two-sided tail bound for a
/// mean of `N` single-shot polarizations.
pub fn hoeffding_tail(epsilon: f64, samples: u64, n: usize) -> f64 {
    let d = four_pow(n);
    let r = (d - 1.0) / d;
    2.0 * (-(8.0 / 9.0) * r * r * epsilon * epsilon * samples as f64).exp()
}

/// The full fidelity estimate with its uncertainty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub n: usize,
    pub chi_f: f64,
    pub success_ratio: Option<f64>,
    pub gamma_hats: [f64; 3],
    pub counts: [usize; 3],
    /// Shots per circuit; `None` for exact distributions.
    pub shots: Option<u64>,
    pub bootstrap_sd: f64,
    pub bootstrap_resamples: usize,
    /// Set when `chi_f` lies outside `[0, 1]`.
    pub out_of_range: bool,
}

/// Combines the three ensembles. `ensembles[i]` holds the per-circuit
/// polarizations of kind `i + 1`.
pub fn estimate_fidelity(
    ensembles: [&GammaEstimate; 3],
    n: usize,
    shots: Option<u64>,
    resamples: usize,
    seed: u64,
) -> Result<FidelityEstimate> {
    let g = ensembles.map(|e| e.gamma);
    let chi = chi_f(g[0], g[1], g[2], n)?;
    let sd = bootstrap_sd(
        ensembles.map(|e| e.per_circuit.as_slice()),
        n,
        resamples,
        seed,
    )?;
    Ok(FidelityEstimate {
        n,
        chi_f: chi,
        success_ratio: success_ratio(g[0], g[1], g[2], n),
        gamma_hats: g,
        counts: ensembles.map(|e| e.per_circuit.len()),
        shots,
        bootstrap_sd: sd,
        bootstrap_resamples: resamples,
        out_of_range: !(0.0..=1.0).contains(&chi),
    })
}
