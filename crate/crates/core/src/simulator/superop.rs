use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::pauli::PauliOperator;

/// Width limit for dense transfer matrices.
pub const DENSE_LIMIT: usize = 6;

/// A channel as its Pauli transfer matrix `R_ij = Tr(P_i E(P_j)) / 2^n`.
///
/// Rows and columns follow the base-4 Pauli index (qubit 0 most
/// significant, `I, X, Y, Z`). Composition is matrix multiplication with the
/// later channel on the left.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    n: usize,
    ptm: DMatrix<f64>,
}

fn check_width(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        return Err(Error::WidthLimit {
            what: "dense superoperator",
            n,
            limit: DENSE_LIMIT,
        });
    }
    Ok(())
}

fn pauli_matrices(n: usize) -> Vec<DMatrix<C64>> {
    (0..1usize << (2 * n))
        .map(|i| PauliOperator::from_index(n, i).matrix())
        .collect()
}

impl Superoperator {
    pub fn identity(n: usize) -> Result<Self> {
        check_width(n)?;
        let d = 1 << (2 * n);
        Ok(Self {
            n,
            ptm: DMatrix::identity(d, d),
        })
    }

    pub fn from_ptm(n: usize, ptm: DMatrix<f64>) -> Result<Self> {
        check_width(n)?;
        let d = 1 << (2 * n);
        if ptm.shape() != (d, d) {
            return Err(Error::invalid(format!(
                "transfer matrix for n={n} must be {d}x{d}, got {:?}",
                ptm.shape()
            )));
        }
        Ok(Self { n, ptm })
    }

    /// The channel `ρ ↦ Σ_k K_k ρ K_k†`.
    pub fn from_kraus(n: usize, kraus: &[DMatrix<C64>]) -> Result<Self> {
        check_width(n)?;
        let dim = 1usize << n;
        if let Some(k) = kraus.iter().find(|k| k.shape() != (dim, dim)) {
            return Err(Error::invalid(format!(
                "Kraus operator has shape {:?}, expected {dim}x{dim}",
                k.shape()
            )));
        }
        let paulis = pauli_matrices(n);
        let d = paulis.len();
        let mut ptm = DMatrix::zeros(d, d);
        for (j, pj) in paulis.iter().enumerate() {
            let mut image = DMatrix::<C64>::zeros(dim, dim);
            for k in kraus {
                image += k * pj * k.adjoint();
            }
            for (i, pi) in paulis.iter().enumerate() {
                ptm[(i, j)] = (pi * &image).trace().re / dim as f64;
            }
        }
        Ok(Self { n, ptm })
    }

    pub fn from_unitary(n: usize, u: &DMatrix<C64>) -> Result<Self> {
        Self::from_kraus(n, std::slice::from_ref(u))
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn ptm(&self) -> &DMatrix<f64> {
        &self.ptm
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Superoperator) -> Result<Superoperator> {
        if self.n != first.n {
            return Err(Error::WidthMismatch {
                left: self.n,
                right: first.n,
            });
        }
        Ok(Self {
            n: self.n,
            ptm: &self.ptm * &first.ptm,
        })
    }

    /// Adjoint channel; the inverse for unitary channels.
    pub fn transpose(&self) -> Superoperator {
        Self {
            n: self.n,
            ptm: self.ptm.transpose(),
        }
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let row = self.ptm.row(0);
        row.iter()
            .enumerate()
            .all(|(j, &v)| (v - if j == 0 { 1.0 } else { 0.0 }).abs() <= tol)
    }

    /// Normalized Choi state `(1/d²) Σ_ij R_ij P_jᵀ ⊗ P_i`, with the
    /// reference system as the first factor.
    pub fn choi(&self) -> DMatrix<C64> {
        let paulis = pauli_matrices(self.n);
        let dim = 1usize << self.n;
        let d2 = (dim * dim) as f64;
        let mut out = DMatrix::<C64>::zeros(dim * dim, dim * dim);
        for (j, pj) in paulis.iter().enumerate() {
            let pjt = pj.transpose();
            for (i, pi) in paulis.iter().enumerate() {
                let r = self.ptm[(i, j)];
                if r == 0.0 {
                    continue;
                }
                out += pjt.kronecker(pi) * C64::new(r / d2, 0.0);
            }
        }
        out
    }

    /// `⟨φ|(I ⊗ E)(|φ⟩⟨φ|)|φ⟩` for the maximally entangled `|φ⟩`, computed
    /// as `Tr(R)/4^n`.
    pub fn entanglement_fidelity(&self) -> f64 {
        self.ptm.trace() / self.ptm.nrows() as f64
    }

    pub fn average_gate_fidelity(&self) -> f64 {
        average_gate_fidelity_from(self.entanglement_fidelity(), self.n)
    }

    /// `(4^n F − 1)/(4^n − 1)`.
    pub fn polarization(&self) -> f64 {
        polarization_from_fidelity(self.entanglement_fidelity(), self.n)
    }

    /// Normalized trace of the unital block (rows and columns `1..`).
    pub fn polarization_from_unital_block(&self) -> f64 {
        let d = self.ptm.nrows();
        let t: f64 = (1..d).map(|i| self.ptm[(i, i)]).sum();
        t / (d - 1) as f64
    }
}

pub fn average_gate_fidelity_from(f: f64, n: usize) -> f64 {
    let d = (1u64 << n) as f64;
    (d * f + 1.0) / (d + 1.0)
}

pub fn polarization_from_fidelity(f: f64, n: usize) -> f64 {
    let d2 = 4f64.powi(n as i32);
    (d2 * f - 1.0) / (d2 - 1.0)
}
