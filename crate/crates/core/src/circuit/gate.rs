use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordId;
use crate::linalg::{rx, rz, C64};

/// Angles of `Rz(θ)·X90·Rz(φ)·X90·Rz(ψ)`, with `Rz(a) = exp(−iaZ/2)` and
/// `X90 = exp(−iπX/4)`. `ψ` acts first.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zxzxz {
    pub psi: f64,
    pub phi: f64,
    pub theta: f64,
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

impl Zxzxz {
    pub fn new(psi: f64, phi: f64, theta: f64) -> Self {
        Self { psi, phi, theta }
    }

    pub fn matrix(&self) -> Matrix2<C64> {
        let x90 = rx(FRAC_PI_2);
        rz(self.theta) * x90 * rz(self.phi) * x90 * rz(self.psi)
    }

    /// Angles of the exact inverse. Uses `Rx(−a) = Rz(π) Rx(a) Rz(−π)`.
    pub fn inverse(&self) -> Self {
        Self {
            psi: -self.theta - PI,
            phi: -self.phi,
            theta: PI - self.psi,
        }
    }

    /// Angles reproducing `u` up to global phase, each wrapped into `(−π, π]`.
    pub fn from_unitary(u: &Matrix2<C64>) -> Self {
        // Z-Y-Z Euler angles first: u ∝ Rz(a) Ry(b) Rz(c).
        let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        let b = 2.0 * u10.norm().atan2(u00.norm());
        let tol = 1e-12;
        let (a, c) = if u10.norm() < tol {
            (u11.arg() - u00.arg(), 0.0)
        } else if u00.norm() < tol {
            (u10.arg() - (-u01).arg(), 0.0)
        } else {
            (u10.arg() - u00.arg(), u11.arg() - u10.arg())
        };
        // Rz(a) Ry(b) Rz(c) ∝ Rz(a + π) X90 Rz(b + π) X90 Rz(c).
        Self {
            psi: wrap_angle(c),
            phi: wrap_angle(b + PI),
            theta: wrap_angle(a + PI),
        }
    }
}

/// A gate in the supported set.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// Parameterized single-qubit gate, realized with two X90 pulses.
    U {
        qubit: usize,
        angles: Zxzxz,
    },
    /// Single-qubit Clifford from the canonical table.
    Clifford {
        qubit: usize,
        id: CliffordId,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn u(qubit: usize, psi: f64, phi: f64, theta: f64) -> Gate {
        Gate::U {
            qubit,
            angles: Zxzxz::new(psi, phi, theta),
        }
    }

    pub fn clifford(qubit: usize, id: CliffordId) -> Gate {
        Gate::Clifford { qubit, id }
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::U { qubit, .. } | Gate::Clifford { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Lowest qubit index touched, used to order gates within a layer.
    pub(crate) fn first_qubit(&self) -> usize {
        match *self {
            Gate::U { qubit, .. } | Gate::Clifford { qubit, .. } => qubit,
            Gate::Cnot { control, target } => control.min(target),
        }
    }

    pub fn is_single_qubit(&self) -> bool {
        !matches!(self, Gate::Cnot { .. })
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::U { qubit, angles } => Gate::U {
                qubit,
                angles: angles.inverse(),
            },
            Gate::Clifford { qubit, id } => Gate::Clifford {
                qubit,
                id: id.inverse(),
            },
            g @ Gate::Cnot { .. } => g,
        }
    }

    /// 2×2 matrix of a single-qubit gate; `None` for CNOT. Clifford matrices
    /// are the canonical representatives, which may differ from the ZXZXZ
    /// realization by a global phase.
    pub fn matrix_1q(&self) -> Option<Matrix2<C64>> {
        match self {
            Gate::U { angles, .. } => Some(angles.matrix()),
            Gate::Clifford { id, .. } => Some(id.matrix()),
            Gate::Cnot { .. } => None,
        }
    }

    /// ZXZXZ angles that a device would run for a single-qubit gate.
    pub fn pulse_angles(&self) -> Option<Zxzxz> {
        match self {
            Gate::U { angles, .. } => Some(*angles),
            Gate::Clifford { id, .. } => Some(id.angles()),
            Gate::Cnot { .. } => None,
        }
    }
}
