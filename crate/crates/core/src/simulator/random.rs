//! Random unitaries and channels for tests and validation.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::C64;
use crate::pauli::PauliOperator;

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Haar-random `dim × dim` unitary (QR of a Ginibre matrix with the
/// diagonal phases of `R` removed).
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let qr = ginibre(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random CPTP map on `n` qubits with `rank` Kraus operators, taken from the
/// blocks of a random isometry.
pub fn random_cptp<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Vec<DMatrix<C64>> {
    let dim = 1usize << n;
    let big = random_unitary(dim * rank, rng);
    (0..rank)
        .map(|k| big.view((k * dim, 0), (dim, dim)).into_owned())
        .collect()
}

/// Kraus operators of a random Pauli channel: flat-Dirichlet rates over all
/// `4^n` Paulis.
pub fn random_pauli_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<DMatrix<C64>> {
    let count = 1usize << (2 * n);
    let w: Vec<f64> = (0..count).map(|_| rand_distr::Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    (0..count)
        .map(|i| PauliOperator::from_index(n, i).matrix() * C64::new((w[i] / total).sqrt(), 0.0))
        .collect()
}

/// A random Pauli channel conjugated by a Haar-random unitary.
pub fn random_rotated_pauli_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<DMatrix<C64>> {
    let u = random_unitary(1 << n, rng);
    random_pauli_channel(n, rng)
        .into_iter()
        .map(|k| &u * k * u.adjoint())
        .collect()
}
