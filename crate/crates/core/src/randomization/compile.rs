use rand::Rng;

use crate::circuit::{AlternatingCircuit, Circuit, Gate, Layer, Zxzxz};
use crate::clifford::CliffordId;
use crate::error::{Error, Result};
use crate::pauli::{sample_uniform_pauli, PauliOperator};

/// A random compilation of an alternating circuit.
#[derive(Clone, Debug)]
pub struct RandomCompilation {
    pub source: AlternatingCircuit,
    /// Frame Paulis inserted after each local layer except the last.
    pub frame_paulis: Vec<PauliOperator>,
    /// The Pauli left after the last local layer.
    pub final_pauli: PauliOperator,
    pub realized: Circuit,
}

/// Per-qubit product `p · g · q` with `q` applied first.
fn dress(qubit: usize, p: &PauliOperator, g: Option<&Gate>, q: &PauliOperator) -> Gate {
    let pc = CliffordId::from_pauli(p.letter(qubit));
    let qc = CliffordId::from_pauli(q.letter(qubit));
    match g {
        None => Gate::clifford(qubit, pc.compose(qc)),
        Some(Gate::Clifford { id, .. }) => Gate::clifford(qubit, pc.compose(*id).compose(qc)),
        Some(g) => {
            let m = p.letter(qubit).matrix()
                * g.matrix_1q().expect("single-qubit gate")
                * q.letter(qubit).matrix();
            Gate::U {
                qubit,
                angles: Zxzxz::from_unitary(&m),
            }
        }
    }
}

fn push_through(e: &Layer, p: &PauliOperator) -> PauliOperator {
    let mut out = p.clone();
    for g in e.gates() {
        if let Gate::Cnot { control, target } = *g {
            out = out
                .conjugate_by_cnot(control, target)
                .expect("validated layer");
        }
    }
    out
}

/// Randomized compilation with the Paulis `P_1, …, P_d̃` given explicitly.
///
/// Local layer `i` becomes `P_i · l_i · e_{i−1} P_{i−1} e_{i−1}†`, with
/// `P_0 = I`. Every qubit of every dressed layer carries a gate, even when
/// the product is the identity, so the number of X90 pulses does not depend
/// on the sampled Paulis.
pub fn compile_with_paulis(
    c: &AlternatingCircuit,
    paulis: &[PauliOperator],
) -> Result<RandomCompilation> {
    let n = c.width();
    let d = c.num_local_layers();
    if paulis.len() != d {
        return Err(Error::invalid(format!(
            "randomized compilation needs {d} Paulis, got {}",
            paulis.len()
        )));
    }
    if let Some(p) = paulis.iter().find(|p| p.num_qubits() != n) {
        return Err(Error::WidthMismatch {
            left: n,
            right: p.num_qubits(),
        });
    }
    let mut realized = Circuit::new(n);
    let mut carried = PauliOperator::identity(n);
    for i in 0..d {
        let l = c.local_layer(i);
        let gates = (0..n)
            .map(|q| dress(q, &paulis[i], l.gate_on(q), &carried))
            .collect();
        realized.push(Layer::local(n, gates)?)?;
        if i + 1 < d {
            let e = c.entangling_layer(i);
            realized.push(e.clone())?;
            carried = push_through(e, &paulis[i]);
        }
    }
    let final_pauli = paulis
        .last()
        .cloned()
        .unwrap_or_else(|| PauliOperator::identity(n));
    Ok(RandomCompilation {
        source: c.clone(),
        frame_paulis: paulis[..d.saturating_sub(1)].to_vec(),
        final_pauli,
        realized,
    })
}

/// Randomized compilation with uniformly sampled frame Paulis.
pub fn randomized_compile<R: Rng + ?Sized>(
    c: &AlternatingCircuit,
    rng: &mut R,
) -> Result<RandomCompilation> {
    let paulis: Vec<_> = (0..c.num_local_layers())
        .map(|_| sample_uniform_pauli(c.width(), rng))
        .collect();
    compile_with_paulis(c, &paulis)
}
