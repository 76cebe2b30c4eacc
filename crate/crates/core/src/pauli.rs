//! Exact n-qubit Pauli group arithmetic in symplectic form.
//!
//! A [`PauliOperator`] is `phase · σ_0 ⊗ σ_1 ⊗ … ⊗ σ_{n-1}` with each `σ_q`
//! one of the Hermitian matrices `I, X, Y, Z` and `phase ∈ {+1, +i, −1, −i}`.
//! Qubit `q` owns bit `q` of the packed `x`/`z` words; `(x, z) = (1, 1)` is `Y`
//! itself (not `XZ`).
//!
//! Phase-free Paulis are indexed `0..4^n` by base-4 digits with qubit 0 most
//! significant and digit values `I=0, X=1, Y=2, Z=3`. The same ordering is
//! used for Pauli-transfer-matrix rows and columns.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{BitString, MAX_QUBITS};
use crate::clifford::CliffordId;
use crate::error::{Error, Result};
use crate::linalg::{c, C64};

/// Power of `i`: `One = i^0`, `I = i^1`, `MinusOne = i^2`, `MinusI = i^3`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    #[default]
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_exponent(k: i64) -> Phase {
        match k.rem_euclid(4) {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn exponent(self) -> i64 {
        self as i64
    }

    pub fn to_complex(self) -> C64 {
        match self {
            Phase::One => c(1.0, 0.0),
            Phase::I => c(0.0, 1.0),
            Phase::MinusOne => c(-1.0, 0.0),
            Phase::MinusI => c(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_exponent(self.exponent() + rhs.exponent())
    }
}

/// A single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    pub const ALL: [Pauli1; 4] = [Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z];

    pub fn from_bits(x: bool, z: bool) -> Pauli1 {
        match (x, z) {
            (false, false) => Pauli1::I,
            (true, false) => Pauli1::X,
            (true, true) => Pauli1::Y,
            (false, true) => Pauli1::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli1::I => (false, false),
            Pauli1::X => (true, false),
            Pauli1::Y => (true, true),
            Pauli1::Z => (false, true),
        }
    }

    /// Base-4 digit used in Pauli indices.
    pub fn digit(self) -> usize {
        self as usize
    }

    pub fn from_digit(d: usize) -> Pauli1 {
        Pauli1::ALL[d & 3]
    }

    pub fn matrix(self) -> Matrix2<C64> {
        let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
        match self {
            Pauli1::I => Matrix2::new(o, z, z, o),
            Pauli1::X => Matrix2::new(z, o, o, z),
            Pauli1::Y => Matrix2::new(z, -i, i, z),
            Pauli1::Z => Matrix2::new(o, z, z, -o),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli1::I => 'I',
            Pauli1::X => 'X',
            Pauli1::Y => 'Y',
            Pauli1::Z => 'Z',
        }
    }

    /// Exponent `g` with `σ_a σ_b = i^g σ_{a·b}`.
    fn product_exponent(a: Pauli1, b: Pauli1) -> i64 {
        let (x1, z1) = a.bits();
        let (x2, z2) = b.bits();
        let (x1, z1, x2, z2) = (x1 as i64, z1 as i64, x2 as i64, z2 as i64);
        match (x1, z1) {
            (0, 0) => 0,
            (1, 1) => z2 - x2,
            (1, 0) => z2 * (2 * x2 - 1),
            _ => x2 * (1 - 2 * z2),
        }
    }
}

/// An n-qubit Pauli operator with exact phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        Self {
            n,
            x: 0,
            z: 0,
            phase: Phase::One,
        }
    }

    pub fn from_letters(phase: Phase, letters: &[Pauli1]) -> Self {
        let mut p = Self::identity(letters.len());
        p.phase = phase;
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    /// A weight-one Pauli `letter` on `qubit`.
    pub fn single(n: usize, qubit: usize, letter: Pauli1) -> Result<Self> {
        if qubit >= n {
            return Err(Error::QubitOutOfRange { index: qubit, n });
        }
        let mut p = Self::identity(n);
        p.set_letter(qubit, letter);
        Ok(p)
    }

    /// Phase-free Pauli from its base-4 index.
    pub fn from_index(n: usize, index: usize) -> Self {
        let mut p = Self::identity(n);
        for q in 0..n {
            let d = (index >> (2 * (n - 1 - q))) & 3;
            p.set_letter(q, Pauli1::from_digit(d));
        }
        p
    }

    /// Base-4 index of the phase-free part. Panics above 31 qubits.
    pub fn index(&self) -> usize {
        assert!(self.n <= 31, "Pauli index overflows for n > 31");
        (0..self.n).fold(0usize, |acc, q| (acc << 2) | self.letter(q).digit())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn without_phase(&self) -> Self {
        self.clone().with_phase(Phase::One)
    }

    pub fn letter(&self, qubit: usize) -> Pauli1 {
        assert!(qubit < self.n);
        Pauli1::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    fn set_letter(&mut self, qubit: usize, letter: Pauli1) {
        let (x, z) = letter.bits();
        let m = 1u64 << qubit;
        self.x = if x { self.x | m } else { self.x & !m };
        self.z = if z { self.z | m } else { self.z & !m };
    }

    pub fn letters(&self) -> Vec<Pauli1> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn x_bits(&self) -> Vec<bool> {
        (0..self.n).map(|q| (self.x >> q) & 1 == 1).collect()
    }

    pub fn z_bits(&self) -> Vec<bool> {
        (0..self.n).map(|q| (self.z >> q) & 1 == 1).collect()
    }

    pub(crate) fn packed(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// True when the phase-free part is the identity.
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// The X-support as a bit string: the bits this Pauli flips when applied
    /// to a computational basis state.
    pub fn x_mask(&self) -> BitString {
        BitString::from_bits(&self.x_bits())
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        let anti = (self.x & other.z) ^ (self.z & other.x);
        anti.count_ones().is_multiple_of(2)
    }

    /// The matrix product `self · other`.
    pub fn compose(&self, other: &PauliOperator) -> Result<PauliOperator> {
        if self.n != other.n {
            return Err(Error::WidthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut k = self.phase.exponent() + other.phase.exponent();
        for q in 0..self.n {
            k += Pauli1::product_exponent(self.letter(q), other.letter(q));
        }
        Ok(PauliOperator {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: Phase::from_exponent(k),
        })
    }

    /// Conjugation by a Clifford that acts on `qubits` only, given the images
    /// of `X_q` and `Z_q`. Uses `Y = i X Z`.
    fn conjugate_local(
        &self,
        qubits: &[usize],
        image: impl Fn(usize, Pauli1) -> PauliOperator,
    ) -> PauliOperator {
        let mut rest = self.clone();
        for &q in qubits {
            rest.set_letter(q, Pauli1::I);
        }
        let mut out = rest;
        for &q in qubits {
            let img = match self.letter(q) {
                Pauli1::I => continue,
                Pauli1::X => image(q, Pauli1::X),
                Pauli1::Z => image(q, Pauli1::Z),
                Pauli1::Y => {
                    let xz = image(q, Pauli1::X)
                        .compose(&image(q, Pauli1::Z))
                        .expect("images share the register width");
                    let ph = xz.phase * Phase::I;
                    xz.with_phase(ph)
                }
            };
            out = img.compose(&out).expect("images share the register width");
        }
        out
    }

    /// `CNOT · self · CNOT`.
    pub fn conjugate_by_cnot(&self, control: usize, target: usize) -> Result<PauliOperator> {
        for &q in &[control, target] {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n: self.n,
                });
            }
        }
        if control == target {
            return Err(Error::OverlappingQubits(control));
        }
        let n = self.n;
        Ok(self.conjugate_local(&[control, target], |q, g| {
            let mut p = PauliOperator::identity(n);
            match (q == control, g) {
                (true, Pauli1::X) => {
                    p.set_letter(control, Pauli1::X);
                    p.set_letter(target, Pauli1::X);
                }
                (true, _) => p.set_letter(control, Pauli1::Z),
                (false, Pauli1::X) => p.set_letter(target, Pauli1::X),
                (false, _) => {
                    p.set_letter(control, Pauli1::Z);
                    p.set_letter(target, Pauli1::Z);
                }
            }
            p
        }))
    }

    /// `C · self · C†` for the single-qubit Clifford `clifford` on `qubit`.
    pub fn conjugate_by_single_qubit_clifford(
        &self,
        qubit: usize,
        clifford: CliffordId,
    ) -> Result<PauliOperator> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n: self.n,
            });
        }
        let n = self.n;
        Ok(self.conjugate_local(&[qubit], |q, g| {
            let (phase, letter) = clifford.image(g);
            let mut p = PauliOperator::identity(n);
            p.set_letter(q, letter);
            p.with_phase(phase)
        }))
    }

    /// Dense `2^n × 2^n` matrix, qubit 0 as the leftmost tensor factor.
    pub fn matrix(&self) -> DMatrix<C64> {
        assert!(
            self.n <= 12,
            "dense Pauli matrices are limited to 12 qubits"
        );
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        let phase = self.phase.to_complex();
        for col in 0..dim {
            let mut row = col;
            let mut amp = phase;
            for q in 0..self.n {
                let bit_pos = self.n - 1 - q;
                let b = (col >> bit_pos) & 1;
                match self.letter(q) {
                    Pauli1::I => {}
                    Pauli1::X => row ^= 1 << bit_pos,
                    Pauli1::Y => {
                        row ^= 1 << bit_pos;
                        amp *= if b == 0 { c(0.0, 1.0) } else { c(0.0, -1.0) };
                    }
                    Pauli1::Z => {
                        if b == 1 {
                            amp = -amp;
                        }
                    }
                }
            }
            m[(row, col)] = amp;
        }
        m
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.phase {
            Phase::One => "+",
            Phase::I => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        })?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses `"+XIZY"`, `"-iXX"`, `"iZ"` or a bare `"XYZ"` (phase `+1`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, rest) = match s.as_bytes().first() {
            Some(b'+') => (1, &s[1..]),
            Some(b'-') => (-1, &s[1..]),
            _ => (1, s),
        };
        let (imag, body) = match rest.strip_prefix('i') {
            Some(b) => (true, b),
            None => (false, rest),
        };
        let offset = s.len() - body.len();
        let mut letters = Vec::with_capacity(body.len());
        for (k, ch) in body.chars().enumerate() {
            letters.push(match ch {
                'I' => Pauli1::I,
                'X' => Pauli1::X,
                'Y' => Pauli1::Y,
                'Z' => Pauli1::Z,
                other => {
                    return Err(Error::parse(
                        1,
                        offset + k + 1,
                        format!("unexpected character {other:?} in Pauli string"),
                    ))
                }
            });
        }
        if letters.len() > MAX_QUBITS {
            return Err(Error::WidthLimit {
                what: "Pauli string",
                n: letters.len(),
                limit: MAX_QUBITS,
            });
        }
        let phase = Phase::from_exponent(if sign < 0 { 2 } else { 0 } + if imag { 1 } else { 0 });
        Ok(PauliOperator::from_letters(phase, &letters))
    }
}

/// Draws a phase-free Pauli uniformly from the `4^n` possibilities.
pub fn sample_uniform_pauli<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliOperator {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    PauliOperator {
        n,
        x: rng.gen::<u64>() & mask,
        z: rng.gen::<u64>() & mask,
        phase: Phase::One,
    }
}

/// Largest width for which channel rates are stored as a dense `4^n` vector.
pub const DENSE_CHANNEL_LIMIT: usize = 6;

#[derive(Clone, Debug, PartialEq)]
enum Rates {
    Dense(Vec<f64>),
    Sparse(BTreeMap<(u64, u64), f64>),
}

/// A stochastic Pauli channel `ρ ↦ Σ_P r_P P ρ P`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannel {
    n: usize,
    rates: Rates,
}

impl PauliChannel {
    /// Builds a channel from `(Pauli, rate)` pairs. Phases are ignored and
    /// repeated Paulis accumulate. Rates must be nonnegative and sum to one.
    pub fn new(n: usize, rates: impl IntoIterator<Item = (PauliOperator, f64)>) -> Result<Self> {
        let mut ch = if n <= DENSE_CHANNEL_LIMIT {
            PauliChannel {
                n,
                rates: Rates::Dense(vec![0.0; 1 << (2 * n)]),
            }
        } else {
            PauliChannel {
                n,
                rates: Rates::Sparse(BTreeMap::new()),
            }
        };
        for (p, r) in rates {
            if p.num_qubits() != n {
                return Err(Error::WidthMismatch {
                    left: n,
                    right: p.num_qubits(),
                });
            }
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::invalid(format!(
                    "Pauli rate {r} for {p} is not a probability"
                )));
            }
            match &mut ch.rates {
                Rates::Dense(v) => v[p.index()] += r,
                Rates::Sparse(m) => *m.entry(p.packed()).or_insert(0.0) += r,
            }
        }
        let total = ch.iter().map(|(_, r)| r).sum::<f64>();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("Pauli rates sum to {total}, not 1")));
        }
        Ok(ch)
    }

    /// `ρ ↦ (1 − p) ρ + p/3 (XρX + YρY + ZρZ)` on a single qubit.
    pub fn single_qubit_depolarizing(p: f64) -> Result<Self> {
        let rates = [
            (Pauli1::I, 1.0 - p),
            (Pauli1::X, p / 3.0),
            (Pauli1::Y, p / 3.0),
            (Pauli1::Z, p / 3.0),
        ];
        Self::new(
            1,
            rates
                .into_iter()
                .map(|(l, r)| (PauliOperator::from_letters(Phase::One, &[l]), r)),
        )
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Probability of each Pauli with nonzero rate.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (PauliOperator, f64)> + '_> {
        match &self.rates {
            Rates::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|(_, r)| **r != 0.0)
                    .map(move |(i, r)| (PauliOperator::from_index(self.n, i), *r)),
            ),
            Rates::Sparse(m) => Box::new(m.iter().map(move |(&(x, z), r)| {
                (
                    PauliOperator {
                        n: self.n,
                        x,
                        z,
                        phase: Phase::One,
                    },
                    *r,
                )
            })),
        }
    }

    pub fn rate(&self, p: &PauliOperator) -> f64 {
        match &self.rates {
            Rates::Dense(v) => v[p.index()],
            Rates::Sparse(m) => m.get(&p.packed()).copied().unwrap_or(0.0),
        }
    }

    /// The entanglement fidelity, which for a Pauli channel is the identity rate.
    pub fn fidelity(&self) -> f64 {
        self.rate(&PauliOperator::identity(self.n))
    }

    /// Diagonal of the Pauli transfer matrix: `λ_Q = Σ_P r_P (±1)` with the
    /// sign negative when `P` and `Q` anticommute.
    pub fn ptm_diagonal(&self) -> Result<Vec<f64>> {
        if self.n > DENSE_CHANNEL_LIMIT {
            return Err(Error::WidthLimit {
                what: "Pauli channel transfer matrix",
                n: self.n,
                limit: DENSE_CHANNEL_LIMIT,
            });
        }
        let dim = 1usize << (2 * self.n);
        let terms: Vec<_> = self.iter().collect();
        Ok((0..dim)
            .map(|qi| {
                let q = PauliOperator::from_index(self.n, qi);
                terms
                    .iter()
                    .map(|(p, r)| if p.commutes_with(&q) { *r } else { -*r })
                    .sum()
            })
            .collect())
    }
}
