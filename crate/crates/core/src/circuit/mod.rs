//! Layered circuit representation.
//!
//! Layers are applied in list order: `layers[0]` acts first. Qubits are
//! numbered from 0, and qubit 0 is the leftmost tensor factor in every dense
//! matrix produced here.

mod alternating;
mod gate;
mod text;

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

pub use alternating::{to_alternating_form, AlternatingCircuit};
pub use gate::{wrap_angle, Gate, Zxzxz};
pub use random::random_circuit;
pub use text::{parse_circuit, parse_circuit_with_comments, serialize_circuit};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Default width limit for dense unitary construction.
pub const UNITARY_LIMIT: usize = 8;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LayerKind {
    /// Single-qubit gates only.
    Local,
    /// CNOT gates only.
    Entangling,
    /// Any supported gates.
    Mixed,
}

impl LayerKind {
    pub fn tag(self) -> char {
        match self {
            LayerKind::Local => 'L',
            LayerKind::Entangling => 'E',
            LayerKind::Mixed => 'M',
        }
    }
}

/// Gates on pairwise-disjoint qubits, sorted by their lowest qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    n: usize,
    kind: LayerKind,
    gates: Vec<Gate>,
}

impl Layer {
    pub fn new(n: usize, kind: LayerKind, mut gates: Vec<Gate>) -> Result<Self> {
        let mut used = BTreeSet::new();
        for g in &gates {
            match (kind, g.is_single_qubit()) {
                (LayerKind::Local, false) => {
                    return Err(Error::invalid("a one-qubit layer cannot hold a cnot"))
                }
                (LayerKind::Entangling, true) => {
                    return Err(Error::invalid("a two-qubit layer holds only cnot gates"))
                }
                _ => {}
            }
            if let Gate::Cnot { control, target } = *g {
                if control == target {
                    return Err(Error::OverlappingQubits(control));
                }
            }
            for q in g.qubits() {
                if q >= n {
                    return Err(Error::QubitOutOfRange { index: q, n });
                }
                if !used.insert(q) {
                    return Err(Error::OverlappingQubits(q));
                }
            }
        }
        gates.sort_by_key(|g| g.first_qubit());
        Ok(Self { n, kind, gates })
    }

    pub fn local(n: usize, gates: Vec<Gate>) -> Result<Self> {
        Self::new(n, LayerKind::Local, gates)
    }

    pub fn entangling(n: usize, gates: Vec<Gate>) -> Result<Self> {
        Self::new(n, LayerKind::Entangling, gates)
    }

    pub fn empty(n: usize, kind: LayerKind) -> Self {
        Self {
            n,
            kind,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> LayerKind {
        self.kind
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The single-qubit gate acting on `qubit`, if any.
    pub fn gate_on(&self, qubit: usize) -> Option<&Gate> {
        self.gates.iter().find(|g| g.qubits().contains(&qubit))
    }
}

/// Each gate replaced by its inverse.
pub fn reverse_layer(l: &Layer) -> Layer {
    Layer {
        n: l.n,
        kind: l.kind,
        gates: l.gates.iter().map(Gate::inverse).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    layers: Vec<Layer>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            layers: Vec::new(),
        }
    }

    pub fn from_layers(n: usize, layers: Vec<Layer>) -> Result<Self> {
        let mut c = Self::new(n);
        for l in layers {
            c.push(l)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, layer: Layer) -> Result<()> {
        if layer.n != self.n {
            return Err(Error::WidthMismatch {
                left: self.n,
                right: layer.n,
            });
        }
        self.layers.push(layer);
        Ok(())
    }

    /// Appends all layers of `other` after those of `self`.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        for l in &other.layers {
            self.push(l.clone())?;
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.gates.len()).sum()
    }

    pub fn cnot_count(&self) -> usize {
        self.layers
            .iter()
            .flat_map(|l| &l.gates)
            .filter(|g| !g.is_single_qubit())
            .count()
    }
}

/// Layers reversed in order, each replaced by its inverse.
pub fn motion_reverse(c: &Circuit) -> Circuit {
    Circuit {
        n: c.n,
        layers: c.layers.iter().rev().map(reverse_layer).collect(),
    }
}

pub(crate) fn apply_1q(u: &mut DMatrix<C64>, n: usize, qubit: usize, m: &Matrix2<C64>) {
    let bit = 1usize << (n - 1 - qubit);
    let dim = u.nrows();
    for mut col in u.column_iter_mut() {
        for i in 0..dim {
            if i & bit == 0 {
                let (a, b) = (col[i], col[i | bit]);
                col[i] = m[(0, 0)] * a + m[(0, 1)] * b;
                col[i | bit] = m[(1, 0)] * a + m[(1, 1)] * b;
            }
        }
    }
}

pub(crate) fn apply_cnot(u: &mut DMatrix<C64>, n: usize, control: usize, target: usize) {
    let cb = 1usize << (n - 1 - control);
    let tb = 1usize << (n - 1 - target);
    for i in 0..u.nrows() {
        if i & cb != 0 && i & tb == 0 {
            u.swap_rows(i, i | tb);
        }
    }
}

/// Dense unitary of `c`, qubit 0 as the leftmost tensor factor.
pub fn unitary_of(c: &Circuit) -> Result<DMatrix<C64>> {
    unitary_of_limited(c, UNITARY_LIMIT)
}

pub fn unitary_of_limited(c: &Circuit, limit: usize) -> Result<DMatrix<C64>> {
    if c.n > limit {
        return Err(Error::WidthLimit {
            what: "dense unitary",
            n: c.n,
            limit,
        });
    }
    let mut u = DMatrix::identity(1 << c.n, 1 << c.n);
    for l in &c.layers {
        for g in &l.gates {
            match *g {
                Gate::Cnot { control, target } => apply_cnot(&mut u, c.n, control, target),
                _ => apply_1q(&mut u, c.n, g.first_qubit(), &g.matrix_1q().unwrap()),
            }
        }
    }
    Ok(u)
}

mod random {
    use super::*;
    use crate::clifford::CliffordId;
    use rand::Rng;

    /// Random circuit mixing all layer kinds and gate types, for testing and
    /// benchmarking.
    pub fn random_circuit<R: Rng>(n: usize, depth: usize, rng: &mut R) -> Circuit {
        let mut c = Circuit::new(n);
        for _ in 0..depth {
            let kind = match rng.gen_range(0..3) {
                0 => LayerKind::Local,
                1 => LayerKind::Entangling,
                _ => LayerKind::Mixed,
            };
            let mut qubits: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                qubits.swap(i, rng.gen_range(0..=i));
            }
            let mut gates = Vec::new();
            let mut i = 0;
            while i < n {
                let want_cnot = match kind {
                    LayerKind::Local => false,
                    LayerKind::Entangling => true,
                    LayerKind::Mixed => rng.gen_bool(0.5),
                };
                if want_cnot && i + 1 < n {
                    if rng.gen_bool(0.7) {
                        gates.push(Gate::cnot(qubits[i], qubits[i + 1]));
                    }
                    i += 2;
                } else if !want_cnot {
                    let q = qubits[i];
                    match rng.gen_range(0..3) {
                        0 => {}
                        1 => gates.push(Gate::clifford(
                            q,
                            CliffordId::new(rng.gen_range(0..24)).unwrap(),
                        )),
                        _ => gates.push(Gate::u(
                            q,
                            rng.gen_range(-3.2..3.2),
                            rng.gen_range(-3.2..3.2),
                            rng.gen_range(-3.2..3.2),
                        )),
                    }
                    i += 1;
                } else {
                    i += 1;
                }
            }
            c.push(Layer::new(n, kind, gates).unwrap()).unwrap();
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cnot_matrix, kron2, max_abs_diff, rx};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_circuit_is_identity() {
        let u = unitary_of(&Circuit::new(2)).unwrap();
        assert_eq!(u, DMatrix::identity(4, 4));
    }

    #[test]
    fn single_cnot_is_textbook_matrix() {
        let circ = Circuit::from_layers(
            2,
            vec![Layer::entangling(2, vec![Gate::cnot(0, 1)]).unwrap()],
        )
        .unwrap();
        let u = unitary_of(&circ).unwrap();
        let expected = DMatrix::from_column_slice(4, 4, cnot_matrix().as_slice());
        assert_eq!(u, expected);
    }

    #[test]
    fn x90_on_first_qubit_is_kron_product() {
        let g = Gate::u(0, 0.4, -0.9, 1.3);
        let circ = Circuit::from_layers(2, vec![Layer::local(2, vec![g]).unwrap()]).unwrap();
        let u = unitary_of(&circ).unwrap();
        let k = kron2(&g.matrix_1q().unwrap(), &Matrix2::identity());
        let expected = DMatrix::from_column_slice(4, 4, k.as_slice());
        assert!(max_abs_diff(&u, &expected) < 1e-15);
        let x90 = Zxzxz::from_unitary(&rx(std::f64::consts::FRAC_PI_2));
        let circ = Circuit::from_layers(
            2,
            vec![Layer::local(
                2,
                vec![Gate::U {
                    qubit: 1,
                    angles: x90,
                }],
            )
            .unwrap()],
        )
        .unwrap();
        let u = unitary_of(&circ).unwrap();
        let k = kron2(&Matrix2::identity(), &rx(std::f64::consts::FRAC_PI_2));
        let expected = DMatrix::from_column_slice(4, 4, k.as_slice());
        assert!(crate::linalg::distance_up_to_phase(u.as_slice(), expected.as_slice()) < 1e-12);
    }

    #[test]
    fn layer_validation() {
        assert!(matches!(
            Layer::entangling(2, vec![Gate::cnot(0, 0)]),
            Err(Error::OverlappingQubits(0))
        ));
        assert!(Layer::local(2, vec![Gate::cnot(0, 1)]).is_err());
        assert!(Layer::entangling(2, vec![Gate::u(0, 0.0, 0.0, 0.0)]).is_err());
        assert!(matches!(
            Layer::local(2, vec![Gate::u(2, 0.0, 0.0, 0.0)]),
            Err(Error::QubitOutOfRange { index: 2, n: 2 })
        ));
        assert!(Layer::new(
            3,
            LayerKind::Mixed,
            vec![Gate::cnot(0, 1), Gate::u(1, 0.0, 0.0, 0.0)]
        )
        .is_err());
        assert!(Circuit::from_layers(2, vec![Layer::empty(3, LayerKind::Local)]).is_err());
    }

    #[test]
    fn reverse_layer_cases() {
        let e = Layer::empty(2, LayerKind::Local);
        assert_eq!(reverse_layer(&e), e);
        let cx = Layer::entangling(2, vec![Gate::cnot(1, 0)]).unwrap();
        assert_eq!(reverse_layer(&cx), cx);
        let l = Layer::local(1, vec![Gate::u(0, 0.1, 0.2, 0.3)]).unwrap();
        let circ = Circuit::from_layers(1, vec![l.clone(), reverse_layer(&l)]).unwrap();
        let u = unitary_of(&circ).unwrap();
        assert!(max_abs_diff(&u, &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn motion_reverse_small_cases() {
        assert_eq!(motion_reverse(&Circuit::new(3)).depth(), 0);
        let l = Layer::local(1, vec![Gate::u(0, 0.1, 0.2, 0.3)]).unwrap();
        let circ = Circuit::from_layers(1, vec![l.clone()]).unwrap();
        assert_eq!(motion_reverse(&circ).layers(), &[reverse_layer(&l)]);
    }

    #[test]
    fn motion_reverse_undoes_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..10 {
                let circ = random_circuit(n, 6, &mut rng);
                let mut full = circ.clone();
                full.extend(&motion_reverse(&circ)).unwrap();
                let u = unitary_of(&full).unwrap();
                // Clifford representatives may carry a phase; c_rev c is exact
                // because each gate meets its own inverse.
                let d = crate::linalg::distance_up_to_phase(
                    u.as_slice(),
                    DMatrix::<C64>::identity(1 << n, 1 << n).as_slice(),
                );
                assert!(d < 1e-10, "{d}");
            }
        }
    }

    #[test]
    fn unitary_is_unitary_and_limited() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let circ = random_circuit(3, 5, &mut rng);
        let u = unitary_of(&circ).unwrap();
        let id = DMatrix::identity(8, 8);
        assert!(max_abs_diff(&(u.adjoint() * &u), &id) < 1e-10);
        assert!(matches!(
            unitary_of(&Circuit::new(9)),
            Err(Error::WidthLimit { .. })
        ));
    }
}
