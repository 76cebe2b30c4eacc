//! Small dense complex helpers shared by the circuit and simulator modules.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

pub type C64 = Complex64;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entrywise deviation between `a` and `e^{iφ} b`, with the phase
/// chosen from the largest entry of `b`. Both slices must have equal length.
pub fn distance_up_to_phase(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (k, bk) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(k, v)| (k, *v))
        .unwrap_or((0, C64::new(0.0, 0.0)));
    if bk.norm() == 0.0 {
        return a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let ratio = a[k] / bk;
    let phase = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `exp(-i a Z / 2)`
pub fn rz(angle: f64) -> Matrix2<C64> {
    let h = angle / 2.0;
    Matrix2::new(
        C64::from_polar(1.0, -h),
        c(0.0, 0.0),
        c(0.0, 0.0),
        C64::from_polar(1.0, h),
    )
}

/// `exp(-i a X / 2)`
pub fn rx(angle: f64) -> Matrix2<C64> {
    let (s, co) = (angle / 2.0).sin_cos();
    Matrix2::new(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
}

/// `exp(-i a Y / 2)`
pub fn ry(angle: f64) -> Matrix2<C64> {
    let (s, co) = (angle / 2.0).sin_cos();
    Matrix2::new(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
}

pub fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// CNOT with the control as the first tensor factor.
pub fn cnot_matrix() -> Matrix4<C64> {
    let o = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    Matrix4::new(o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z)
}

/// `exp(-i t (I - Z) ⊗ (I - X) / 2)`; `t = π/2` gives the exact CNOT.
pub fn cnot_rotation(t: f64) -> Matrix4<C64> {
    // The generator is |1><1| ⊗ (I - X), whose eigenvalue on |1>|-> is 2 and
    // zero elsewhere, so only the control-one block changes.
    let phase = C64::from_polar(1.0, -2.0 * t);
    let plus = 0.5 * (c(1.0, 0.0) + phase);
    let minus = 0.5 * (c(1.0, 0.0) - phase);
    let o = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    Matrix4::new(
        o, z, z, z, //
        z, o, z, z, //
        z, z, plus, minus, //
        z, z, minus, plus,
    )
}

pub fn identity(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn cnot_rotation_at_quarter_turn_is_cnot() {
        let u = cnot_rotation(FRAC_PI_2);
        let d = distance_up_to_phase(u.as_slice(), cnot_matrix().as_slice());
        assert!(d < 1e-15, "{d}");
        // And exactly, not only up to phase.
        assert!((u - cnot_matrix()).norm() < 1e-15);
    }

    #[test]
    fn cnot_rotation_is_unitary() {
        let u = cnot_rotation(0.37);
        assert!((u.adjoint() * u - Matrix4::identity()).norm() < 1e-14);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let a = rx(0.3);
        let b = a * C64::from_polar(1.0, 1.1);
        assert!(distance_up_to_phase(a.as_slice(), b.as_slice()) < 1e-15);
        assert!(distance_up_to_phase(a.as_slice(), rx(0.31).as_slice()) > 1e-3);
    }
}
