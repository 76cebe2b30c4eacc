//! Error-model families and per-circuit model sampling.
//!
//! Noise attaches to the physical operations a circuit runs:
//!
//! * every single-qubit gate is two X90 pulses separated by perfect Z
//!   rotations; each pulse on qubit `q` is `Rx(π/2 + θ_q)` followed by a
//!   Pauli channel with probabilities `(p_X, p_Y, p_Z)` summing to `ε_q`;
//! * every CNOT on the ordered pair `(c, t)` is
//!   `exp(−i(π/2 + θ_ct)(I − Z)⊗(I − X)/2)` followed by a two-qubit Pauli
//!   channel over the 15 non-identity Paulis with total probability `ε_ct`;
//! * each qubit is depolarized with probability `r_q` just before readout,
//!   split evenly over `X`, `Y` and `Z`.
//!
//! Stochastic totals are split over their Paulis by a flat Dirichlet draw.
//! The `Depolarizing` family replaces all of the above gate errors with
//! global depolarizing channels and is meant for exactness checks.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Stochastic Pauli errors only.
    #[serde(rename = "S")]
    S,
    /// Over-rotations only.
    #[serde(rename = "H")]
    H,
    /// Both, at reduced strengths.
    #[serde(rename = "S+H")]
    SH,
    /// CNOT over-rotations only.
    #[serde(rename = "H-2Q")]
    H2Q,
    /// Noiseless, including readout.
    #[serde(rename = "none")]
    None,
    /// Global depolarizing gate errors plus readout errors.
    #[serde(rename = "depolarizing")]
    Depolarizing,
}

impl Family {
    pub const BENCHMARK_FAMILIES: [Family; 4] = [Family::S, Family::H, Family::SH, Family::H2Q];

    pub fn name(self) -> &'static str {
        match self {
            Family::S => "S",
            Family::H => "H",
            Family::SH => "S+H",
            Family::H2Q => "H-2Q",
            Family::None => "none",
            Family::Depolarizing => "depolarizing",
        }
    }

    pub fn caps(self) -> FamilyCaps {
        let zero = FamilyCaps::default();
        let readout = READOUT_CAP;
        match self {
            Family::S => FamilyCaps {
                eps1: 1e-2,
                eps2: 2e-2,
                readout,
                ..zero
            },
            Family::H => FamilyCaps {
                theta1: 0.125,
                theta2: 0.25,
                readout,
                ..zero
            },
            Family::SH => FamilyCaps {
                eps1: 5e-3,
                eps2: 1e-2,
                theta1: 0.075,
                theta2: 0.125,
                readout,
                ..zero
            },
            Family::H2Q => FamilyCaps {
                theta2: 0.25,
                readout,
                ..zero
            },
            Family::None => zero,
            Family::Depolarizing => FamilyCaps {
                depol1: 1e-2,
                depol2: 2e-2,
                readout,
                ..zero
            },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "S" => Family::S,
            "H" => Family::H,
            "S+H" | "SH" => Family::SH,
            "H-2Q" | "H2Q" => Family::H2Q,
            "none" => Family::None,
            "depolarizing" => Family::Depolarizing,
            _ => return Err(Error::invalid(format!("unknown error-model family {s:?}"))),
        })
    }
}

/// Upper bound on every per-qubit readout depolarizing rate.
pub const READOUT_CAP: f64 = 1e-2;

/// Upper bounds of the uniform distributions each parameter is drawn from.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyCaps {
    pub theta1: f64,
    pub theta2: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub readout: f64,
    /// Depolarizing probability per X90 pulse (debug family).
    pub depol1: f64,
    /// Depolarizing probability per CNOT (debug family).
    pub depol2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitError {
    pub over_rotation: f64,
    /// Probabilities of `X`, `Y`, `Z` after each pulse.
    pub pauli_rates: [f64; 3],
    /// Depolarizing probability `u` per pulse: `ρ ↦ (1 − u)ρ + u·I/2^n`.
    pub depolarizing: f64,
    pub readout: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairError {
    pub control: usize,
    pub target: usize,
    pub over_rotation: f64,
    /// Probabilities of the 15 non-identity two-qubit Paulis, indexed by
    /// `4·d_control + d_target − 1` with digits `I=0, X=1, Y=2, Z=3`.
    pub pauli_rates: Vec<f64>,
    pub depolarizing: f64,
}

/// A fully sampled error model for an `n`-qubit device.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub family: Family,
    pub caps: FamilyCaps,
    pub n: usize,
    pub qubits: Vec<QubitError>,
    /// One entry per ordered pair, in the order `(0,1), (0,2), …, (1,0), …`.
    pub pairs: Vec<PairError>,
}

fn dirichlet<R: Rng + ?Sized>(k: usize, total: f64, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| total * x / s).collect()
}

fn uniform<R: Rng + ?Sized>(cap: f64, rng: &mut R) -> f64 {
    if cap > 0.0 {
        rng.gen_range(0.0..=cap)
    } else {
        0.0
    }
}

impl ErrorModel {
    /// The noiseless model.
    pub fn ideal(n: usize) -> Self {
        Self::sample(Family::None, n, &mut crate::seed::rng_from_seed(0))
    }

    /// Draws every parameter of `family` independently.
    pub fn sample<R: Rng + ?Sized>(family: Family, n: usize, rng: &mut R) -> Self {
        Self::sample_with_caps(family, family.caps(), n, rng)
    }

    pub fn sample_with_caps<R: Rng + ?Sized>(
        family: Family,
        caps: FamilyCaps,
        n: usize,
        rng: &mut R,
    ) -> Self {
        let qubits = (0..n)
            .map(|_| {
                let over_rotation = uniform(caps.theta1, rng);
                let eps = uniform(caps.eps1, rng);
                let split = dirichlet(3, eps, rng);
                QubitError {
                    over_rotation,
                    pauli_rates: [split[0], split[1], split[2]],
                    depolarizing: uniform(caps.depol1, rng),
                    readout: uniform(caps.readout, rng),
                }
            })
            .collect();
        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1));
        for control in 0..n {
            for target in 0..n {
                if control == target {
                    continue;
                }
                let over_rotation = uniform(caps.theta2, rng);
                let eps = uniform(caps.eps2, rng);
                pairs.push(PairError {
                    control,
                    target,
                    over_rotation,
                    pauli_rates: dirichlet(15, eps, rng),
                    depolarizing: uniform(caps.depol2, rng),
                });
            }
        }
        Self {
            family,
            caps,
            n,
            qubits,
            pairs,
        }
    }

    pub fn pair(&self, control: usize, target: usize) -> &PairError {
        debug_assert_ne!(control, target);
        let idx = control * (self.n - 1) + if target > control { target - 1 } else { target };
        &self.pairs[idx]
    }

    /// Checks sizes and that every rate lies within its cap.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Data(m));
        if self.qubits.len() != self.n || self.pairs.len() != self.n * self.n.saturating_sub(1) {
            return bad(format!(
                "error model for n={} has the wrong number of entries",
                self.n
            ));
        }
        let within = |v: f64, cap: f64| (0.0..=cap + 1e-15).contains(&v);
        for (q, e) in self.qubits.iter().enumerate() {
            let eps: f64 = e.pauli_rates.iter().sum();
            if !within(e.over_rotation, self.caps.theta1)
                || !within(eps, self.caps.eps1)
                || e.pauli_rates.iter().any(|&r| r < 0.0)
                || !within(e.depolarizing, self.caps.depol1)
                || !within(e.readout, self.caps.readout)
            {
                return bad(format!("qubit {q} parameters exceed the family caps"));
            }
        }
        for (i, p) in self.pairs.iter().enumerate() {
            let eps: f64 = p.pauli_rates.iter().sum();
            if p.pauli_rates.len() != 15
                || p.control == p.target
                || p.control >= self.n
                || p.target >= self.n
                || self.pair(p.control, p.target) != p
            {
                return bad(format!("pair entry {i} is malformed"));
            }
            if !within(p.over_rotation, self.caps.theta2)
                || !within(eps, self.caps.eps2)
                || p.pauli_rates.iter().any(|&r| r < 0.0)
                || !within(p.depolarizing, self.caps.depol2)
            {
                return bad(format!(
                    "pair ({},{}) parameters exceed the family caps",
                    p.control, p.target
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: ErrorModel = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn caps_match_reference_values() {
        let s = Family::S.caps();
        assert_eq!((s.eps1, s.eps2, s.theta1, s.theta2), (1e-2, 2e-2, 0.0, 0.0));
        let h = Family::H.caps();
        assert_eq!(
            (h.eps1, h.eps2, h.theta1, h.theta2),
            (0.0, 0.0, 1.25e-1, 2.5e-1)
        );
        let sh = Family::SH.caps();
        assert_eq!(
            (sh.eps1, sh.eps2, sh.theta1, sh.theta2),
            (5e-3, 1e-2, 7.5e-2, 1.25e-1)
        );
        let h2 = Family::H2Q.caps();
        assert_eq!(
            (h2.eps1, h2.eps2, h2.theta1, h2.theta2),
            (0.0, 0.0, 0.0, 2.5e-1)
        );
        for f in Family::BENCHMARK_FAMILIES {
            assert_eq!(f.caps().readout, 1e-2);
        }
    }

    #[test]
    fn samples_respect_caps() {
        let mut rng = rng_from_seed(1);
        for f in [
            Family::S,
            Family::H,
            Family::SH,
            Family::H2Q,
            Family::None,
            Family::Depolarizing,
        ] {
            for _ in 0..50 {
                let m = ErrorModel::sample(f, 4, &mut rng);
                m.validate().unwrap();
                for p in &m.pairs {
                    assert_eq!(m.pair(p.control, p.target), p);
                }
            }
        }
    }

    #[test]
    fn dirichlet_split_sums_to_total() {
        let mut rng = rng_from_seed(2);
        let v = dirichlet(15, 0.02, &mut rng);
        assert!((v.iter().sum::<f64>() - 0.02).abs() < 1e-15);
        assert!(v.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let m = ErrorModel::sample(Family::SH, 3, &mut rng_from_seed(3));
        let back = ErrorModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
        let mut broken = m.clone();
        broken.qubits[0].over_rotation = 1.0;
        assert!(ErrorModel::from_json(&broken.to_json().unwrap()).is_err());
    }

    #[test]
    fn family_names_parse() {
        for f in [
            Family::S,
            Family::H,
            Family::SH,
            Family::H2Q,
            Family::None,
            Family::Depolarizing,
        ] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("X".parse::<Family>().is_err());
    }
}
