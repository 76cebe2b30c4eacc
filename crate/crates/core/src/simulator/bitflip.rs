use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `A_{kw} = C(w,k) 2^k / 3^w`: the chance that exactly `k` bits flip when
/// `w` qubits each receive a uniformly random non-identity Pauli.
pub fn bitflip_matrix(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::invalid("bit-flip matrix needs n >= 1"));
    }
    Ok(DMatrix::from_fn(n + 1, n + 1, |k, w| {
        if k > w {
            0.0
        } else {
            binomial(w, k) * 2f64.powi(k as i32) / 3f64.powi(w as i32)
        }
    }))
}

/// First row of `A⁻¹`, by numerical inversion.
pub fn bitflip_inverse_first_row(n: usize) -> Result<Vec<f64>> {
    let inv = bitflip_matrix(n)?
        .try_inverse()
        .ok_or_else(|| Error::invalid("bit-flip matrix is singular"))?;
    Ok(inv.row(0).iter().copied().collect())
}
