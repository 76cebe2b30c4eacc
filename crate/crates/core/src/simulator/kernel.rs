//! Pauli-basis state-vector kernel.
//!
//! A state `ρ` is stored as the real vector `t_P = Tr(P ρ)` over all `4^n`
//! Paulis (so `ρ = 2^{−n} Σ_P t_P P`). Single-qubit operations touch the
//! 3×3 non-identity block of one qubit; two-qubit operations act on 16-entry
//! groups. Global depolarizing channels commute with every unital channel,
//! so they are accumulated into one scalar applied at the end.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use nalgebra::{Matrix2, Matrix4};

use super::noise::ErrorModel;
use crate::circuit::{Circuit, Gate};
use crate::linalg::{cnot_rotation, C64};
use crate::pauli::{Pauli1, PauliOperator};

pub type Mat3 = [[f64; 3]; 3];

const IDENTITY3: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

#[derive(Clone, Debug)]
pub enum Op {
    /// Acts on the `X, Y, Z` components of one qubit.
    One { qubit: usize, m: Mat3 },
    /// Sparse 16×16 block on `(a, b)`; entries are `(row, col, value)` with
    /// index `4·d_a + d_b`.
    Two {
        a: usize,
        b: usize,
        entries: Vec<(u8, u8, f64)>,
    },
}

/// A compiled circuit ready to act on Pauli vectors.
#[derive(Clone, Debug)]
pub struct Program {
    pub n: usize,
    pub ops: Vec<Op>,
    /// Product of all global depolarizing polarizations.
    pub global: f64,
}

fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn rz3(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn rx3(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
}

fn diag3(d: [f64; 3]) -> Mat3 {
    [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]
}

/// Transfer-matrix block of a single-qubit unitary.
pub fn ptm_1q(u: &Matrix2<C64>) -> Mat3 {
    let paulis = [Pauli1::X.matrix(), Pauli1::Y.matrix(), Pauli1::Z.matrix()];
    let mut out = [[0.0; 3]; 3];
    for j in 0..3 {
        let img = u * paulis[j] * u.adjoint();
        for i in 0..3 {
            out[i][j] = (paulis[i] * img).trace().re / 2.0;
        }
    }
    out
}

/// Dense 16×16 transfer matrix of a two-qubit unitary.
pub fn ptm_2q(u: &Matrix4<C64>) -> [[f64; 16]; 16] {
    let paulis: Vec<Matrix4<C64>> = (0..16)
        .map(|i| Matrix4::from_iterator(PauliOperator::from_index(2, i).matrix().iter().copied()))
        .collect();
    let mut out = [[0.0; 16]; 16];
    for j in 0..16 {
        let img = u * paulis[j] * u.adjoint();
        for i in 0..16 {
            out[i][j] = (paulis[i] * img).trace().re / 4.0;
        }
    }
    out
}

fn sparse(m: &[[f64; 16]; 16]) -> Vec<(u8, u8, f64)> {
    let mut out = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v.abs() > 1e-15 {
                out.push((i as u8, j as u8, v));
            }
        }
    }
    out
}

fn ideal_cnot_entries() -> &'static [(u8, u8, f64)] {
    static CX: OnceLock<Vec<(u8, u8, f64)>> = OnceLock::new();
    CX.get_or_init(|| {
        let m = ptm_2q(&cnot_rotation(FRAC_PI_2));
        // Exact CNOT is a signed permutation; round away trigonometric dust.
        let mut s = sparse(&m);
        for e in &mut s {
            e.2 = e.2.round();
        }
        s.retain(|e| e.2 != 0.0);
        s
    })
}

fn anticommute(a: usize, b: usize) -> bool {
    a != 0 && b != 0 && a != b
}

/// Eigenvalues `λ_X, λ_Y, λ_Z` of the Pauli channel with rates `(p_X, p_Y, p_Z)`.
pub fn pauli_channel_diag_1q(p: &[f64; 3]) -> [f64; 3] {
    let mut out = [1.0; 3];
    for (q, o) in out.iter_mut().enumerate() {
        for (k, &r) in p.iter().enumerate() {
            if anticommute(q + 1, k + 1) {
                *o -= 2.0 * r;
            }
        }
    }
    out
}

/// Eigenvalues over the 16 two-qubit Paulis of a channel with the given
/// rates on the 15 non-identity Paulis.
pub fn pauli_channel_diag_2q(p: &[f64]) -> [f64; 16] {
    let mut out = [1.0; 16];
    for (q, o) in out.iter_mut().enumerate() {
        for (k, &r) in p.iter().enumerate() {
            let k = k + 1;
            let odd = anticommute(q / 4, k / 4) ^ anticommute(q % 4, k % 4);
            if odd {
                *o -= 2.0 * r;
            }
        }
    }
    out
}

fn noisy_1q(angles: &crate::circuit::Zxzxz, o: f64, diag: &[f64; 3]) -> Mat3 {
    let pulse = mul3(&diag3(*diag), &rx3(FRAC_PI_2 + o));
    let mut m = rz3(angles.psi);
    m = mul3(&pulse, &m);
    m = mul3(&rz3(angles.phi), &m);
    m = mul3(&pulse, &m);
    mul3(&rz3(angles.theta), &m)
}

/// Compiles `c` without noise.
pub fn compile_ideal(c: &Circuit) -> Program {
    let mut ops = Vec::with_capacity(c.gate_count());
    for l in c.layers() {
        for g in l.gates() {
            match *g {
                Gate::Cnot { control, target } => ops.push(Op::Two {
                    a: control,
                    b: target,
                    entries: ideal_cnot_entries().to_vec(),
                }),
                _ => ops.push(Op::One {
                    qubit: g.first_qubit(),
                    m: ptm_1q(&g.matrix_1q().expect("single-qubit gate")),
                }),
            }
        }
    }
    Program {
        n: c.width(),
        ops,
        global: 1.0,
    }
}

/// Compiles `c` with the gate errors of `model` (readout excluded).
pub fn compile_noisy(c: &Circuit, model: &ErrorModel) -> Program {
    let n = c.width();
    assert_eq!(model.n, n, "error model width must match the circuit");
    let diags: Vec<[f64; 3]> = model
        .qubits
        .iter()
        .map(|q| pauli_channel_diag_1q(&q.pauli_rates))
        .collect();
    let mut pair_cache: HashMap<(usize, usize), Vec<(u8, u8, f64)>> = HashMap::new();
    let mut ops = Vec::with_capacity(c.gate_count());
    let mut global = 1.0;
    for l in c.layers() {
        for g in l.gates() {
            match *g {
                Gate::Cnot { control, target } => {
                    let pe = model.pair(control, target);
                    global *= 1.0 - pe.depolarizing;
                    let entries = pair_cache
                        .entry((control, target))
                        .or_insert_with(|| {
                            let mut m = ptm_2q(&cnot_rotation(FRAC_PI_2 + pe.over_rotation));
                            let d = pauli_channel_diag_2q(&pe.pauli_rates);
                            for (i, row) in m.iter_mut().enumerate() {
                                for v in row.iter_mut() {
                                    *v *= d[i];
                                }
                            }
                            sparse(&m)
                        })
                        .clone();
                    ops.push(Op::Two {
                        a: control,
                        b: target,
                        entries,
                    });
                }
                _ => {
                    let q = g.first_qubit();
                    let qe = &model.qubits[q];
                    global *= (1.0 - qe.depolarizing).powi(2);
                    let angles = g.pulse_angles().expect("single-qubit gate");
                    ops.push(Op::One {
                        qubit: q,
                        m: noisy_1q(&angles, qe.over_rotation, &diags[q]),
                    });
                }
            }
        }
    }
    Program { n, ops, global }
}

/// Per-qubit depolarizing readout channels of `model`.
pub fn readout_ops(model: &ErrorModel) -> Vec<Op> {
    model
        .qubits
        .iter()
        .enumerate()
        .filter(|(_, q)| q.readout > 0.0)
        .map(|(qubit, q)| {
            let l = 1.0 - 4.0 * q.readout / 3.0;
            Op::One {
                qubit,
                m: diag3([l, l, l]),
            }
        })
        .collect()
}

fn apply_one(v: &mut [f64], n: usize, qubit: usize, m: &Mat3) {
    if *m == IDENTITY3 {
        return;
    }
    let s = 1usize << (2 * (n - 1 - qubit));
    let block = 4 * s;
    for hi in (0..v.len()).step_by(block) {
        for lo in 0..s {
            let b = hi + lo;
            let (x, y, z) = (v[b + s], v[b + 2 * s], v[b + 3 * s]);
            v[b + s] = m[0][0] * x + m[0][1] * y + m[0][2] * z;
            v[b + 2 * s] = m[1][0] * x + m[1][1] * y + m[1][2] * z;
            v[b + 3 * s] = m[2][0] * x + m[2][1] * y + m[2][2] * z;
        }
    }
}

fn apply_two(v: &mut [f64], n: usize, a: usize, b: usize, entries: &[(u8, u8, f64)]) {
    let sa = 1usize << (2 * (n - 1 - a));
    let sb = 1usize << (2 * (n - 1 - b));
    let offsets: [usize; 16] = std::array::from_fn(|k| (k / 4) * sa + (k % 4) * sb);
    let mut input = [0.0; 16];
    let mut output = [0.0; 16];
    for base in 0..v.len() {
        if !(base / sa).is_multiple_of(4) || !(base / sb).is_multiple_of(4) {
            continue;
        }
        for k in 0..16 {
            input[k] = v[base + offsets[k]];
        }
        output.fill(0.0);
        for &(i, j, val) in entries {
            output[i as usize] += val * input[j as usize];
        }
        for k in 0..16 {
            v[base + offsets[k]] = output[k];
        }
    }
}

pub fn apply_op(v: &mut [f64], n: usize, op: &Op) {
    match op {
        Op::One { qubit, m } => apply_one(v, n, *qubit, m),
        Op::Two { a, b, entries } => apply_two(v, n, *a, *b, entries),
    }
}

impl Program {
    /// Applies the whole program to `v` in place.
    pub fn run(&self, v: &mut [f64]) {
        debug_assert_eq!(v.len(), 1 << (2 * self.n));
        for op in &self.ops {
            apply_op(v, self.n, op);
        }
        if self.global != 1.0 {
            for x in v.iter_mut().skip(1) {
                *x *= self.global;
            }
        }
    }
}

/// Pauli vector of `|0…0⟩⟨0…0|`: one on every `{I, Z}^n` string.
pub fn zero_state(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; 1 << (2 * n)];
    for m in 0..1usize << n {
        v[z_index(n, m)] = 1.0;
    }
    v
}

/// Pauli index of the `{I, Z}^n` string whose Z-support is the bit mask `m`
/// (bit `n − 1 − q` for qubit `q`).
pub fn z_index(n: usize, m: usize) -> usize {
    (0..n)
        .filter(|&k| (m >> k) & 1 == 1)
        .map(|k| 3usize << (2 * k))
        .sum()
}

/// Computational-basis probabilities of the state `v`, by Walsh-Hadamard
/// transform of its `{I, Z}^n` components.
pub fn probabilities(n: usize, v: &[f64]) -> Vec<f64> {
    let dim = 1usize << n;
    let mut p: Vec<f64> = (0..dim).map(|m| v[z_index(n, m)]).collect();
    let mut h = 1;
    while h < dim {
        for i in (0..dim).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (p[j], p[j + h]);
                p[j] = a + b;
                p[j + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / dim as f64;
    p.iter_mut().for_each(|x| *x *= scale);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, unitary_of};
    use crate::linalg::{kron2, rx};
    use crate::seed::rng_from_seed;
    use crate::simulator::superop::Superoperator;

    #[test]
    fn ideal_program_matches_dense_unitary() {
        let mut rng = rng_from_seed(1);
        for n in 1..=3 {
            for _ in 0..5 {
                let c = random_circuit(n, 6, &mut rng);
                let prog = compile_ideal(&c);
                let oracle = Superoperator::from_unitary(n, &unitary_of(&c).unwrap()).unwrap();
                let d = 1 << (2 * n);
                for j in 0..d {
                    let mut v = vec![0.0; d];
                    v[j] = 1.0;
                    prog.run(&mut v);
                    for i in 0..d {
                        assert!((v[i] - oracle.ptm()[(i, j)]).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn cnot_block_respects_control_order() {
        // CNOT(1, 0) on two qubits versus the dense oracle with swapped roles.
        let c = crate::circuit::Circuit::from_layers(
            2,
            vec![crate::circuit::Layer::entangling(2, vec![Gate::cnot(1, 0)]).unwrap()],
        )
        .unwrap();
        let oracle = Superoperator::from_unitary(2, &unitary_of(&c).unwrap()).unwrap();
        let prog = compile_ideal(&c);
        for j in 0..16 {
            let mut v = vec![0.0; 16];
            v[j] = 1.0;
            prog.run(&mut v);
            for i in 0..16 {
                assert!((v[i] - oracle.ptm()[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_state_and_probabilities() {
        let v = zero_state(3);
        let p = probabilities(3, &v);
        assert!((p[0] - 1.0).abs() < 1e-15);
        assert!(p[1..].iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn channel_diagonals() {
        let d = pauli_channel_diag_1q(&[0.1, 0.0, 0.0]);
        assert_eq!(d, [1.0, 0.8, 0.8]);
        let mut rates = vec![0.0; 15];
        rates[4 * 3 + 3 - 1] = 0.1; // ZZ
        let d = pauli_channel_diag_2q(&rates);
        assert!((d[4] - 0.8).abs() < 1e-15); // XI anticommutes with ZZ
        assert!((d[4 + 1] - 1.0).abs() < 1e-15); // XX commutes
    }

    #[test]
    fn two_qubit_ptm_of_kron_factorizes() {
        let u = kron2(&rx(0.3), &Matrix2::identity());
        let m = ptm_2q(&u);
        let one = ptm_1q(&rx(0.3));
        // Y⊗I column maps into span{Y⊗I, Z⊗I}.
        assert!((m[8][8] - one[1][1]).abs() < 1e-15);
        assert!((m[12][8] - one[2][1]).abs() < 1e-15);
    }
}
