use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compile_with_paulis, sample_local_layer, LocalTwirlLayer};
use crate::bits::BitString;
use crate::circuit::{
    motion_reverse, parse_circuit_with_comments, serialize_circuit, AlternatingCircuit, Circuit,
    Layer, LayerKind,
};
use crate::error::{Error, Result};
use crate::pauli::{sample_uniform_pauli, PauliOperator};
use crate::seed::{rng_from_seed, split_seed, streams};

/// Which of the three mirror ensembles a sample belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum MirrorKind {
    /// `f_rc(L_rev c̃_rev) · c · L`: the target circuit runs uncompiled.
    M1 = 1,
    /// `f_rc(L_rev c̃_rev c̃ L)`: the full randomized echo.
    M2 = 2,
    /// `f_rc(L_rev L)`: state preparation and measurement only.
    M3 = 3,
}

impl MirrorKind {
    pub const ALL: [MirrorKind; 3] = [MirrorKind::M1, MirrorKind::M2, MirrorKind::M3];

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for MirrorKind {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(MirrorKind::M1),
            2 => Ok(MirrorKind::M2),
            3 => Ok(MirrorKind::M3),
            _ => Err(Error::invalid(format!(
                "mirror kind must be 1, 2 or 3, got {v}"
            ))),
        }
    }
}

impl From<MirrorKind> for u8 {
    fn from(k: MirrorKind) -> u8 {
        k as u8
    }
}

impl fmt::Display for MirrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// One realized mirror circuit together with its noiseless outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorSample {
    pub kind: MirrorKind,
    pub seed: u64,
    pub circuit: Circuit,
    pub target: BitString,
}

impl MirrorSample {
    /// Circuit text with a leading `# kind=<k> seed=<u64> target=<bits>` line.
    pub fn to_text(&self) -> String {
        let body = serialize_circuit(&self.circuit);
        format!(
            "# kind={} seed={} target={}\n{body}",
            self.kind, self.seed, self.target
        )
    }
}

pub fn parse_mirror_sample(text: &str) -> Result<MirrorSample> {
    let (circuit, comments) = parse_circuit_with_comments(text)?;
    for (line, c) in comments {
        if !c.starts_with("kind=") {
            continue;
        }
        let mut kind = None;
        let mut seed = None;
        let mut target = None;
        for field in c.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(line, 1, format!("bad metadata field {field:?}")))?;
            let bad = |what: &str| Error::parse(line, 1, format!("bad {what} {v:?}"));
            match k {
                "kind" => {
                    kind = Some(MirrorKind::try_from(
                        v.parse::<u8>().map_err(|_| bad("kind"))?,
                    )?)
                }
                "seed" => seed = Some(v.parse::<u64>().map_err(|_| bad("seed"))?),
                "target" => target = Some(v.parse::<BitString>().map_err(|_| bad("target"))?),
                _ => {}
            }
        }
        let (Some(kind), Some(seed), Some(target)) = (kind, seed, target) else {
            return Err(Error::parse(
                line,
                1,
                "metadata needs kind, seed and target",
            ));
        };
        if target.len() != circuit.width() {
            return Err(Error::WidthMismatch {
                left: circuit.width(),
                right: target.len(),
            });
        }
        return Ok(MirrorSample {
            kind,
            seed,
            circuit,
            target,
        });
    }
    Err(Error::Data(
        "mirror sample is missing its `# kind=` metadata line".into(),
    ))
}

fn local(l: Layer) -> Layer {
    debug_assert_eq!(l.kind(), LayerKind::Local);
    l
}

/// Layers of the randomly compiled region, before compilation.
fn compiled_region(
    kind: MirrorKind,
    c_tilde: &AlternatingCircuit,
    twirl: &LocalTwirlLayer,
) -> Vec<Layer> {
    let n = c_tilde.width();
    let spacer = || Layer::empty(n, LayerKind::Entangling);
    let rev = motion_reverse(c_tilde.circuit());
    let has_body = c_tilde.num_local_layers() > 0;
    let mut out = Vec::new();
    match kind {
        MirrorKind::M1 => {
            if has_body {
                out.extend(rev.layers().iter().cloned());
                out.push(spacer());
            }
        }
        MirrorKind::M2 => {
            out.push(local(twirl.to_layer()));
            out.push(spacer());
            if has_body {
                out.extend(c_tilde.circuit().layers().iter().cloned());
                out.push(spacer());
                out.extend(rev.layers().iter().cloned());
                out.push(spacer());
            }
        }
        MirrorKind::M3 => {
            out.push(local(twirl.to_layer()));
            out.push(spacer());
        }
    }
    out.push(twirl.inverse_layer());
    out
}

/// Number of frame Paulis `build_mirror_with` expects for these inputs.
pub fn frame_pauli_count(kind: MirrorKind, c_tilde: &AlternatingCircuit) -> usize {
    let d = c_tilde.num_local_layers();
    match kind {
        MirrorKind::M1 => d + 1,
        MirrorKind::M2 => 2 * d + 2,
        MirrorKind::M3 => 2,
    }
}

/// Builds a mirror circuit from an explicit twirl layer and frame Paulis.
///
/// The compiled region always starts and ends with a one-qubit layer and
/// joins adjacent one-qubit layers through empty two-qubit layers, so every
/// `L`, `L_rev` and `c̃` layer keeps its own dressed layer. In kind 1 the bare
/// `L` is followed by an empty two-qubit layer before `c`, which makes kind 1
/// with an empty `c` structurally identical to kind 2.
pub fn build_mirror_with(
    kind: MirrorKind,
    c: &Circuit,
    c_tilde: &AlternatingCircuit,
    twirl: &LocalTwirlLayer,
    paulis: &[PauliOperator],
    seed: u64,
) -> Result<MirrorSample> {
    let n = c_tilde.width();
    if c.width() != n {
        return Err(Error::WidthMismatch {
            left: c.width(),
            right: n,
        });
    }
    if twirl.width() != n {
        return Err(Error::WidthMismatch {
            left: n,
            right: twirl.width(),
        });
    }
    let region = Circuit::from_layers(n, compiled_region(kind, c_tilde, twirl))?;
    let region = AlternatingCircuit::from_circuit(region)?;
    let rc = compile_with_paulis(&region, paulis)?;

    let mut circuit = Circuit::new(n);
    if kind == MirrorKind::M1 {
        circuit.push(twirl.to_layer())?;
        circuit.push(Layer::empty(n, LayerKind::Entangling))?;
        circuit.extend(c)?;
    }
    circuit.extend(&rc.realized)?;
    Ok(MirrorSample {
        kind,
        seed,
        circuit,
        target: rc.final_pauli.x_mask(),
    })
}

/// Samples one mirror circuit; the result depends only on `seed`.
pub fn build_mirror(
    kind: MirrorKind,
    c: &Circuit,
    c_tilde: &AlternatingCircuit,
    seed: u64,
) -> Result<MirrorSample> {
    let n = c_tilde.width();
    let mut rng = rng_from_seed(seed);
    let twirl = sample_local_layer(n, &mut rng);
    let paulis: Vec<_> = (0..frame_pauli_count(kind, c_tilde))
        .map(|_| sample_uniform_pauli(n, &mut rng))
        .collect();
    build_mirror_with(kind, c, c_tilde, &twirl, &paulis, seed)
}

/// Seed of sample `index` of ensemble `kind`: `split_seed(master, MIRROR,
/// kind · 2^32 + index)`.
pub fn ensemble_seed(master: u64, kind: MirrorKind, index: u64) -> u64 {
    split_seed(
        master,
        streams::MIRROR,
        ((kind.number() as u64) << 32) | index,
    )
}

/// `count` independent samples of one ensemble.
pub fn sample_ensemble(
    kind: MirrorKind,
    c: &Circuit,
    c_tilde: &AlternatingCircuit,
    count: usize,
    master_seed: u64,
) -> Result<Vec<MirrorSample>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| build_mirror(kind, c, c_tilde, ensemble_seed(master_seed, kind, i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, to_alternating_form, unitary_of, Gate};
    use crate::seed::rng_from_seed;
    use std::collections::HashSet;

    fn hit_probability(s: &MirrorSample) -> f64 {
        let u = unitary_of(&s.circuit).unwrap();
        u[(s.target.index() as usize, 0)].norm_sqr()
    }

    #[test]
    fn noiseless_mirrors_hit_target() {
        let mut rng = rng_from_seed(2);
        for n in 1..=4 {
            for k in 0..6 {
                let c = random_circuit(n, 5, &mut rng);
                let ct = to_alternating_form(&c).unwrap();
                for kind in MirrorKind::ALL {
                    let s = build_mirror(kind, &c, &ct, 1000 * n as u64 + k).unwrap();
                    assert!((hit_probability(&s) - 1.0).abs() < 1e-10, "{kind} n={n}");
                }
            }
        }
    }

    #[test]
    fn kind_one_contains_c_verbatim() {
        let mut rng = rng_from_seed(3);
        let c = random_circuit(3, 4, &mut rng);
        let ct = to_alternating_form(&c).unwrap();
        let s = build_mirror(MirrorKind::M1, &c, &ct, 9).unwrap();
        assert_eq!(&s.circuit.layers()[2..2 + c.depth()], c.layers());
    }

    #[test]
    fn kind_three_has_no_body() {
        let mut rng = rng_from_seed(4);
        let c = random_circuit(2, 6, &mut rng);
        let ct = to_alternating_form(&c).unwrap();
        let s = build_mirror(MirrorKind::M3, &c, &ct, 1).unwrap();
        assert_eq!(s.circuit.depth(), 3);
        assert_eq!(s.circuit.cnot_count(), 0);
    }

    #[test]
    fn empty_target_degeneracy() {
        // With c empty, kinds 1 and 2 have the same layer structure and
        // the same distribution over realizations.
        let c = Circuit::new(2);
        let ct = to_alternating_form(&c).unwrap();
        let a = build_mirror(MirrorKind::M1, &c, &ct, 5).unwrap();
        let b = build_mirror(MirrorKind::M2, &c, &ct, 5).unwrap();
        let shape = |s: &MirrorSample| {
            s.circuit
                .layers()
                .iter()
                .map(|l| (l.kind(), l.gates().len()))
                .collect::<Vec<_>>()
        };
        assert_eq!(shape(&a), shape(&b));
    }

    #[test]
    fn pulse_budget_balances() {
        // Two pulses per one-qubit gate; the uncompiled c in kind 1 must be
        // balanced by half of kinds 2 and 3.
        let pulses = |c: &Circuit| {
            c.layers()
                .iter()
                .flat_map(|l| l.gates())
                .filter(|g| g.is_single_qubit())
                .count()
                * 2
        };
        let mut rng = rng_from_seed(8);
        for _ in 0..10 {
            let c = random_circuit(3, 5, &mut rng);
            let ct = to_alternating_form(&c).unwrap();
            let m: Vec<_> = MirrorKind::ALL
                .iter()
                .map(|&k| build_mirror(k, &c, &ct, 77).unwrap())
                .collect();
            assert_eq!(
                2 * (pulses(&m[0].circuit) - pulses(&c)),
                pulses(&m[1].circuit) + pulses(&m[2].circuit)
            );
            assert_eq!(
                2 * (m[0].circuit.cnot_count() - c.cnot_count()),
                m[1].circuit.cnot_count() + m[2].circuit.cnot_count()
            );
        }
    }

    #[test]
    fn ensembles_are_reproducible_and_distinct() {
        let mut rng = rng_from_seed(6);
        let c = random_circuit(3, 4, &mut rng);
        let ct = to_alternating_form(&c).unwrap();
        let a = sample_ensemble(MirrorKind::M2, &c, &ct, 1000, 11).unwrap();
        let b = sample_ensemble(MirrorKind::M2, &c, &ct, 1000, 11).unwrap();
        assert_eq!(a, b);
        let texts: HashSet<String> = a.iter().map(|s| serialize_circuit(&s.circuit)).collect();
        assert_eq!(texts.len(), 1000);
        let one = sample_ensemble(MirrorKind::M2, &c, &ct, 1, 11).unwrap();
        assert_eq!(
            one[0],
            build_mirror(
                MirrorKind::M2,
                &c,
                &ct,
                ensemble_seed(11, MirrorKind::M2, 0)
            )
            .unwrap()
        );
    }

    #[test]
    fn text_round_trip() {
        let c = Circuit::from_layers(
            2,
            vec![Layer::entangling(2, vec![Gate::cnot(0, 1)]).unwrap()],
        )
        .unwrap();
        let ct = to_alternating_form(&c).unwrap();
        let s = build_mirror(MirrorKind::M1, &c, &ct, 42).unwrap();
        let back = parse_mirror_sample(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert!(parse_mirror_sample("CIRCUIT n=1\n").is_err());
    }

    #[test]
    fn width_mismatch_rejected() {
        let ct = to_alternating_form(&Circuit::new(2)).unwrap();
        assert!(matches!(
            build_mirror(MirrorKind::M1, &Circuit::new(3), &ct, 0),
            Err(Error::WidthMismatch { .. })
        ));
    }
}
