use serde::{Deserialize, Serialize};

use super::{Circuit, Gate, Layer, LayerKind, Zxzxz};
use crate::error::{Error, Result};

/// A circuit whose layers strictly alternate `l, e, l, …, e, l`, starting and
/// ending with a one-qubit layer. The empty circuit is also accepted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlternatingCircuit {
    circuit: Circuit,
}

impl AlternatingCircuit {
    pub fn from_circuit(circuit: Circuit) -> Result<Self> {
        let d = circuit.depth();
        if d > 0 && d.is_multiple_of(2) {
            return Err(Error::NotAlternating(format!(
                "even depth {d} cannot start and end with a one-qubit layer"
            )));
        }
        for (i, l) in circuit.layers().iter().enumerate() {
            let want = if i % 2 == 0 {
                LayerKind::Local
            } else {
                LayerKind::Entangling
            };
            if l.kind() != want {
                return Err(Error::NotAlternating(format!(
                    "layer {i} is {:?}, expected {want:?}",
                    l.kind()
                )));
            }
        }
        Ok(Self { circuit })
    }

    pub fn width(&self) -> usize {
        self.circuit.width()
    }

    /// Number of one-qubit layers.
    pub fn num_local_layers(&self) -> usize {
        self.circuit.depth().div_ceil(2)
    }

    /// The `i`-th one-qubit layer in application order, from 0.
    pub fn local_layer(&self, i: usize) -> &Layer {
        &self.circuit.layers()[2 * i]
    }

    /// The `i`-th two-qubit layer in application order, from 0. It acts
    /// between local layers `i` and `i + 1`.
    pub fn entangling_layer(&self, i: usize) -> &Layer {
        &self.circuit.layers()[2 * i + 1]
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn into_circuit(self) -> Circuit {
        self.circuit
    }
}

/// Product of two single-qubit gates on the same qubit, `later · earlier`.
fn merge_gates(earlier: &Gate, later: &Gate) -> Gate {
    let q = earlier.first_qubit();
    match (earlier, later) {
        (Gate::Clifford { id: a, .. }, Gate::Clifford { id: b, .. }) => {
            Gate::clifford(q, b.compose(*a))
        }
        _ => {
            let m = later.matrix_1q().unwrap() * earlier.matrix_1q().unwrap();
            Gate::U {
                qubit: q,
                angles: Zxzxz::from_unitary(&m),
            }
        }
    }
}

fn merge_local(n: usize, earlier: &Layer, later: &Layer) -> Layer {
    let gates = (0..n)
        .filter_map(|q| match (earlier.gate_on(q), later.gate_on(q)) {
            (None, None) => None,
            (Some(g), None) | (None, Some(g)) => Some(*g),
            (Some(a), Some(b)) => Some(merge_gates(a, b)),
        })
        .collect();
    Layer::local(n, gates).expect("merged gates stay on distinct qubits")
}

/// Rewrites `c` into alternating form with the same unitary.
///
/// Mixed layers are split into their one-qubit part followed by their CNOT
/// part, consecutive one-qubit layers are merged per qubit, and empty
/// one-qubit layers are inserted wherever two-qubit layers would otherwise
/// touch or sit at either end. A circuit already in alternating form is
/// returned unchanged.
pub fn to_alternating_form(c: &Circuit) -> Result<AlternatingCircuit> {
    let n = c.width();
    let mut split: Vec<Layer> = Vec::with_capacity(c.depth());
    for l in c.layers() {
        match l.kind() {
            LayerKind::Mixed => {
                let (one, two): (Vec<Gate>, Vec<Gate>) =
                    l.gates().iter().partition(|g| g.is_single_qubit());
                split.push(Layer::local(n, one)?);
                split.push(Layer::entangling(n, two)?);
            }
            _ => split.push(l.clone()),
        }
    }

    let mut out: Vec<Layer> = Vec::with_capacity(split.len() + 2);
    for l in split {
        match (out.last().map(Layer::kind), l.kind()) {
            (Some(LayerKind::Local), LayerKind::Local) => {
                let prev = out.pop().unwrap();
                out.push(merge_local(n, &prev, &l));
            }
            (None, LayerKind::Entangling)
            | (Some(LayerKind::Entangling), LayerKind::Entangling) => {
                out.push(Layer::empty(n, LayerKind::Local));
                out.push(l);
            }
            _ => out.push(l),
        }
    }
    if out.last().map(Layer::kind) == Some(LayerKind::Entangling) {
        out.push(Layer::empty(n, LayerKind::Local));
    }
    AlternatingCircuit::from_circuit(Circuit::from_layers(n, out)?)
}
