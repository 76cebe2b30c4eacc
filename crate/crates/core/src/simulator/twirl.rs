use crate::bits::BitString;
use crate::clifford::CliffordId;
use crate::error::{Error, Result};
use crate::pauli::{Pauli1, Phase};

use super::kernel::probabilities;
use super::superop::Superoperator;

/// Width limit for the exact `24^n` average.
pub const TWIRL_LIMIT: usize = 3;

/// Signed permutation of `X, Y, Z` induced by conjugation with a Clifford:
/// `C σ_j C† = sign[j] σ_{perm[j]}`.
fn signed_permutation(id: CliffordId) -> ([usize; 4], [f64; 4]) {
    let mut perm = [0; 4];
    let mut sign = [1.0; 4];
    for d in 1..4 {
        let (phase, p) = id.image(Pauli1::from_digit(d));
        perm[d] = p.digit();
        sign[d] = match phase {
            Phase::One => 1.0,
            Phase::MinusOne => -1.0,
            _ => unreachable!("Clifford images of Hermitian Paulis are Hermitian"),
        };
    }
    (perm, sign)
}

/// `𝔼_L L† E L` over all tensor products of single-qubit Cliffords, as a PTM.
pub fn local_twirl(e: &Superoperator) -> Result<Superoperator> {
    let n = e.width();
    if n > TWIRL_LIMIT {
        return Err(Error::WidthLimit {
            what: "exact local twirl",
            n,
            limit: TWIRL_LIMIT,
        });
    }
    let d = 1usize << (2 * n);
    let tables: Vec<_> = CliffordId::all().map(signed_permutation).collect();
    let mut cur = e.ptm().clone();
    for q in 0..n {
        let stride = 1usize << (2 * (n - 1 - q));
        let digit = |i: usize| (i / stride) % 4;
        let mut acc = nalgebra::DMatrix::<f64>::zeros(d, d);
        for (perm, sign) in &tables {
            let map = |i: usize| {
                let k = digit(i);
                (i + (perm[k] * stride) - k * stride, sign[k])
            };
            for j in 0..d {
                let (pj, sj) = map(j);
                for i in 0..d {
                    let (pi, si) = map(i);
                    acc[(i, j)] += si * sj * cur[(pi, pj)];
                }
            }
        }
        cur = acc / tables.len() as f64;
    }
    Superoperator::from_ptm(n, cur)
}

/// `Σ_x (−1/2)^{h(x,y)} ⟨x|𝔼_L L† E L (|y⟩⟨y|)|x⟩`, which equals the
/// entanglement fidelity of `e` for every `y`.
pub fn exact_local_twirl_fidelity(e: &Superoperator, y: &BitString) -> Result<f64> {
    let n = e.width();
    if y.len() != n {
        return Err(Error::WidthMismatch {
            left: n,
            right: y.len(),
        });
    }
    let t = local_twirl(e)?;
    let yi = y.index() as usize;
    let mut input = vec![0.0; 1 << (2 * n)];
    for m in 0..1usize << n {
        let sign = if (yi & m).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        input[super::kernel::z_index(n, m)] = sign;
    }
    let out = t.ptm() * nalgebra::DVector::from_vec(input);
    let p = probabilities(n, out.as_slice());
    Ok(p.iter()
        .enumerate()
        .map(|(x, px)| (-0.5f64).powi((x ^ yi).count_ones() as i32) * px)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron2, C64};
    use crate::seed::rng_from_seed;
    use crate::simulator::random::{random_cptp, random_rotated_pauli_channel};
    use nalgebra::DMatrix;

    fn depolarizing_1q(f: f64) -> Superoperator {
        let l = (4.0 * f - 1.0) / 3.0;
        let mut m = DMatrix::identity(4, 4) * l;
        m[(0, 0)] = 1.0;
        Superoperator::from_ptm(1, m).unwrap()
    }

    #[test]
    fn identity_and_depolarizing() {
        for y in ["000", "101"] {
            let e = Superoperator::identity(3).unwrap();
            let v = exact_local_twirl_fidelity(&e, &y.parse().unwrap()).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
        let v = exact_local_twirl_fidelity(&depolarizing_1q(0.7), &"0".parse().unwrap()).unwrap();
        assert!((v - 0.7).abs() < 1e-12);
    }

    #[test]
    fn fast_twirl_matches_brute_force_at_two_qubits() {
        let mut rng = rng_from_seed(11);
        let e = Superoperator::from_kraus(2, &random_cptp(2, 2, &mut rng)).unwrap();
        let mut acc = DMatrix::<f64>::zeros(16, 16);
        for a in CliffordId::all() {
            for b in CliffordId::all() {
                let u = kron2(&a.matrix(), &b.matrix());
                let u = DMatrix::<C64>::from_iterator(4, 4, u.iter().copied());
                let c = Superoperator::from_unitary(2, &u).unwrap();
                acc += c.ptm().transpose() * e.ptm() * c.ptm();
            }
        }
        acc /= 576.0;
        let fast = local_twirl(&e).unwrap();
        assert!((fast.ptm() - acc).amax() < 1e-12);
    }

    #[test]
    fn twirl_fidelity_equals_entanglement_fidelity() {
        let mut rng = rng_from_seed(12);
        let e = Superoperator::from_kraus(2, &random_rotated_pauli_channel(2, &mut rng)).unwrap();
        let v = exact_local_twirl_fidelity(&e, &"10".parse().unwrap()).unwrap();
        assert!((v - e.entanglement_fidelity()).abs() < 1e-10);
    }

    #[test]
    fn width_limit() {
        let e = Superoperator::identity(4).unwrap();
        assert!(exact_local_twirl_fidelity(&e, &"0000".parse().unwrap()).is_err());
    }
}
