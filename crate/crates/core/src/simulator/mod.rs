//! Noisy-circuit simulation and exact fidelity oracles.
//!
//! States are evolved as real Pauli vectors (see [`kernel`]); full
//! transfer matrices are only materialized for widths up to
//! [`DENSE_LIMIT`].

pub mod bitflip;
pub mod kernel;
pub mod noise;
pub mod outcome;
pub mod random;
pub mod superop;
pub mod twirl;

use nalgebra::DMatrix;

use crate::circuit::Circuit;
use crate::error::{Error, Result};

pub use bitflip::{bitflip_inverse_first_row, bitflip_matrix};
pub use noise::{ErrorModel, Family, FamilyCaps};
pub use outcome::{sample_shots, OutcomeDistribution, ShotRecord};
pub use superop::{Superoperator, DENSE_LIMIT};
pub use twirl::exact_local_twirl_fidelity;

/// Width limit for state-vector simulation (`4^n` doubles).
pub const SIM_LIMIT: usize = 12;

fn check(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::WidthLimit { what, n, limit });
    }
    Ok(())
}

fn check_model(c: &Circuit, m: &ErrorModel) -> Result<()> {
    if m.n != c.width() {
        return Err(Error::WidthMismatch {
            left: c.width(),
            right: m.n,
        });
    }
    Ok(())
}

fn program_ptm(p: &kernel::Program) -> Result<Superoperator> {
    let d = 1usize << (2 * p.n);
    let mut ptm = DMatrix::zeros(d, d);
    let mut v = vec![0.0; d];
    for j in 0..d {
        v.fill(0.0);
        v[j] = 1.0;
        p.run(&mut v);
        ptm.set_column(j, &nalgebra::DVector::from_column_slice(&v));
    }
    Superoperator::from_ptm(p.n, ptm)
}

/// Transfer matrix of `c` run under `m`, excluding readout error.
pub fn noisy_ptm(c: &Circuit, m: &ErrorModel) -> Result<Superoperator> {
    check("noisy transfer matrix", c.width(), DENSE_LIMIT)?;
    check_model(c, m)?;
    program_ptm(&kernel::compile_noisy(c, m))
}

pub fn ideal_ptm(c: &Circuit) -> Result<Superoperator> {
    check("ideal transfer matrix", c.width(), DENSE_LIMIT)?;
    program_ptm(&kernel::compile_ideal(c))
}

fn distribution(
    n: usize,
    prog: &kernel::Program,
    readout: &[kernel::Op],
) -> Result<OutcomeDistribution> {
    let mut v = kernel::zero_state(n);
    prog.run(&mut v);
    for op in readout {
        kernel::apply_op(&mut v, n, op);
    }
    OutcomeDistribution::new(n, kernel::probabilities(n, &v))
}

/// Outcome probabilities of `c` on `|0…0⟩` under `m`, including readout error.
pub fn output_distribution(c: &Circuit, m: &ErrorModel) -> Result<OutcomeDistribution> {
    check("simulation", c.width(), SIM_LIMIT)?;
    check_model(c, m)?;
    distribution(
        c.width(),
        &kernel::compile_noisy(c, m),
        &kernel::readout_ops(m),
    )
}

pub fn ideal_output_distribution(c: &Circuit) -> Result<OutcomeDistribution> {
    check("simulation", c.width(), SIM_LIMIT)?;
    distribution(c.width(), &kernel::compile_ideal(c), &[])
}

/// Entanglement fidelity of the error map `U(c)† φ(c)`, computed as
/// `4^{−n} Σ_j ⟨R_ideal e_j, R_noisy e_j⟩` without forming either matrix.
pub fn circuit_fidelity_oracle(c: &Circuit, m: &ErrorModel) -> Result<f64> {
    check("fidelity oracle", c.width(), DENSE_LIMIT)?;
    check_model(c, m)?;
    let n = c.width();
    let noisy = kernel::compile_noisy(c, m);
    let ideal = kernel::compile_ideal(c);
    let d = 1usize << (2 * n);
    let (mut a, mut b) = (vec![0.0; d], vec![0.0; d]);
    let mut total = 0.0;
    for j in 0..d {
        a.fill(0.0);
        b.fill(0.0);
        a[j] = 1.0;
        b[j] = 1.0;
        noisy.run(&mut a);
        ideal.run(&mut b);
        total += a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>();
    }
    Ok(total / d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, unitary_of, Gate, Layer, Zxzxz};
    use crate::linalg::{rx, C64};
    use crate::seed::rng_from_seed;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn one_gate(g: Gate) -> Circuit {
        Circuit::from_layers(1, vec![Layer::local(1, vec![g]).unwrap()]).unwrap()
    }

    fn zero_model(n: usize) -> ErrorModel {
        ErrorModel::ideal(n)
    }

    #[test]
    fn zero_noise_gives_ideal_ptm() {
        let mut rng = rng_from_seed(1);
        let c = random_circuit(3, 5, &mut rng);
        let noisy = noisy_ptm(&c, &zero_model(3)).unwrap();
        let oracle = Superoperator::from_unitary(3, &unitary_of(&c).unwrap()).unwrap();
        assert!((noisy.ptm() - oracle.ptm()).amax() < 1e-10);
        assert!((circuit_fidelity_oracle(&c, &zero_model(3)).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn over_rotated_x90_matches_matrix_oracle() {
        // A gate whose pulse sequence is Rz(0)·X90·Rz(π)·X90... reduces to a
        // single pulse only in aggregate, so check the full two-pulse product.
        let theta = 0.07;
        let angles = Zxzxz::new(0.3, -0.4, 1.1);
        let c = one_gate(Gate::U { qubit: 0, angles });
        let mut m = zero_model(1);
        m.qubits[0].over_rotation = theta;
        let x = rx(FRAC_PI_2 + theta);
        let rz = crate::linalg::rz;
        let u = rz(angles.theta) * x * rz(angles.phi) * x * rz(angles.psi);
        let u = DMatrix::<C64>::from_iterator(2, 2, u.iter().copied());
        let oracle = Superoperator::from_unitary(1, &u).unwrap();
        assert!((noisy_ptm(&c, &m).unwrap().ptm() - oracle.ptm()).amax() < 1e-12);
    }

    #[test]
    fn stochastic_noise_is_diagonal_after_ideal() {
        let c = one_gate(Gate::u(0, 0.0, PI, 0.0));
        let mut m = zero_model(1);
        m.qubits[0].pauli_rates = [0.01, 0.02, 0.03];
        let noisy = noisy_ptm(&c, &m).unwrap();
        let ideal = ideal_ptm(&c).unwrap();
        let err = ideal.transpose().compose(&noisy).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(err.ptm()[(i, j)].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn readout_flips_with_expected_probability() {
        let c = Circuit::new(1);
        let mut m = zero_model(1);
        m.qubits[0].readout = 0.006;
        let d = output_distribution(&c, &m).unwrap();
        // X or Y with probability 2r/3 flip the outcome.
        assert!((d.probabilities()[1] - 0.004).abs() < 1e-15);
        let x = one_gate(Gate::u(0, 0.0, 0.0, 0.0));
        let d = ideal_output_distribution(&x).unwrap();
        assert!((d.probabilities()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn global_depolarizing_closed_form() {
        let mut rng = rng_from_seed(4);
        let c = random_circuit(2, 3, &mut rng);
        let mut m = zero_model(2);
        for q in &mut m.qubits {
            q.depolarizing = 0.01;
        }
        for p in &mut m.pairs {
            p.depolarizing = 0.02;
        }
        let prog = kernel::compile_noisy(&c, &m);
        let lambda = prog.global;
        let f = circuit_fidelity_oracle(&c, &m).unwrap();
        assert!((f - (lambda + (1.0 - lambda) / 16.0)).abs() < 1e-12);
    }

    #[test]
    fn fidelity_matches_choi_oracle_for_stochastic_model() {
        let mut rng = rng_from_seed(5);
        let c = random_circuit(2, 4, &mut rng);
        let m = ErrorModel::sample(Family::S, 2, &mut rng);
        let e = ideal_ptm(&c)
            .unwrap()
            .transpose()
            .compose(&noisy_ptm(&c, &m).unwrap())
            .unwrap();
        let dim = 4;
        let mut phi = nalgebra::DVector::<C64>::zeros(dim * dim);
        for a in 0..dim {
            phi[a * dim + a] = C64::new(0.5, 0.0);
        }
        let choi = (phi.adjoint() * e.choi() * &phi)[(0, 0)].re;
        assert!((circuit_fidelity_oracle(&c, &m).unwrap() - choi).abs() < 1e-9);
    }

    #[test]
    fn unitary_families_give_orthogonal_ptms() {
        let mut rng = rng_from_seed(6);
        let c = random_circuit(2, 4, &mut rng);
        let m = ErrorModel::sample(Family::H, 2, &mut rng);
        let r = noisy_ptm(&c, &m).unwrap();
        assert!((r.ptm().transpose() * r.ptm() - DMatrix::<f64>::identity(16, 16)).amax() < 1e-10);
    }

    #[test]
    fn noisy_channels_are_cptp() {
        let mut rng = rng_from_seed(7);
        for fam in Family::BENCHMARK_FAMILIES {
            let c = random_circuit(2, 3, &mut rng);
            let m = ErrorModel::sample(fam, 2, &mut rng);
            let r = noisy_ptm(&c, &m).unwrap();
            assert!(r.is_trace_preserving(1e-10));
            let eig = nalgebra::SymmetricEigen::new(r.choi()).eigenvalues;
            assert!(eig.iter().all(|&x| x > -1e-10));
        }
    }

    #[test]
    fn width_limits() {
        let c = Circuit::new(7);
        assert!(matches!(
            noisy_ptm(&c, &zero_model(7)),
            Err(Error::WidthLimit { .. })
        ));
        assert!(output_distribution(&c, &zero_model(3)).is_err());
        assert!(ideal_output_distribution(&Circuit::new(13)).is_err());
    }
}
