//! The 24-element single-qubit Clifford group.
//!
//! Elements are numbered by breadth-first search over words in `H` and `S`,
//! starting from the identity (id 0). Words are written in application order,
//! so `"HS"` means apply `H`, then `S`, i.e. the matrix `S·H`. The table is
//! deterministic and stable; `mcfe generate` writes the full listing to
//! `cliffords.txt` in its output directory.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::circuit::Zxzxz;
use crate::error::{Error, Result};
use crate::linalg::{c, distance_up_to_phase, C64};
use crate::pauli::{Pauli1, Phase};

pub const CLIFFORD_COUNT: usize = 24;

/// Index into the canonical single-qubit Clifford table.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct CliffordId(u8);

impl TryFrom<u32> for CliffordId {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        CliffordId::new(v)
    }
}

impl From<CliffordId> for u32 {
    fn from(c: CliffordId) -> u32 {
        c.0 as u32
    }
}

struct Table {
    matrices: Vec<Matrix2<C64>>,
    words: Vec<String>,
    mul: [[u8; CLIFFORD_COUNT]; CLIFFORD_COUNT],
    inv: [u8; CLIFFORD_COUNT],
    // Images of X and Z under conjugation.
    images: [[(Phase, Pauli1); 2]; CLIFFORD_COUNT],
    pauli_ids: [u8; 4],
    angles: Vec<Zxzxz>,
}

fn lookup(mats: &[Matrix2<C64>], m: &Matrix2<C64>) -> Option<usize> {
    mats.iter()
        .position(|x| distance_up_to_phase(x.as_slice(), m.as_slice()) < 1e-9)
}

/// Fixes the global phase so that inverse elements get adjoint matrices:
/// the SU(2) representative with positive trace, or for half-turns (trace
/// zero) the Hermitian one with its first nonzero axis component positive.
fn canonical_phase(m: &Matrix2<C64>) -> Matrix2<C64> {
    let su = m / m.determinant().sqrt();
    let tr = su.trace().re;
    if tr.abs() > 1e-9 {
        return if tr < 0.0 { -su } else { su };
    }
    let herm = su * c(0.0, 1.0);
    let axis = [Pauli1::X, Pauli1::Y, Pauli1::Z].map(|p| (p.matrix() * herm).trace().re / 2.0);
    let lead = axis
        .into_iter()
        .find(|v| v.abs() > 1e-9)
        .expect("nonzero axis");
    if lead < 0.0 {
        -herm
    } else {
        herm
    }
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let h = Matrix2::new(c(s2, 0.0), c(s2, 0.0), c(s2, 0.0), c(-s2, 0.0));
        let s = Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
        let gens = [('H', h), ('S', s)];

        let mut matrices = vec![Matrix2::identity()];
        let mut words = vec![String::new()];
        let mut head = 0;
        while head < matrices.len() {
            let (m, w) = (matrices[head], words[head].clone());
            for (name, g) in &gens {
                let child = g * m;
                if lookup(&matrices, &child).is_none() {
                    matrices.push(child);
                    words.push(format!("{w}{name}"));
                }
            }
            head += 1;
        }
        assert_eq!(matrices.len(), CLIFFORD_COUNT);
        let matrices: Vec<_> = matrices.iter().map(canonical_phase).collect();

        let mut mul = [[0u8; CLIFFORD_COUNT]; CLIFFORD_COUNT];
        let mut inv = [0u8; CLIFFORD_COUNT];
        for a in 0..CLIFFORD_COUNT {
            for b in 0..CLIFFORD_COUNT {
                let id = lookup(&matrices, &(matrices[a] * matrices[b])).expect("group is closed");
                mul[a][b] = id as u8;
                if id == 0 {
                    inv[a] = b as u8;
                }
            }
        }

        let paulis: Vec<Matrix2<C64>> = Pauli1::ALL.iter().map(|p| p.matrix()).collect();
        let mut images = [[(Phase::One, Pauli1::I); 2]; CLIFFORD_COUNT];
        for (k, m) in matrices.iter().enumerate() {
            for (slot, g) in [Pauli1::X, Pauli1::Z].into_iter().enumerate() {
                let img = m * g.matrix() * m.adjoint();
                let (letter, sign) = [Pauli1::X, Pauli1::Y, Pauli1::Z]
                    .into_iter()
                    .map(|l| (l, (l.matrix() * img).trace().re / 2.0))
                    .find(|(_, t)| t.abs() > 0.5)
                    .expect("Clifford maps Paulis to Paulis");
                let phase = if sign > 0.0 {
                    Phase::One
                } else {
                    Phase::MinusOne
                };
                images[k][slot] = (phase, letter);
            }
        }

        let mut pauli_ids = [0u8; 4];
        for (d, p) in paulis.iter().enumerate() {
            pauli_ids[d] = lookup(&matrices, p).expect("Paulis are Cliffords") as u8;
        }

        let angles = matrices.iter().map(Zxzxz::from_unitary).collect();

        Table {
            matrices,
            words,
            mul,
            inv,
            images,
            pauli_ids,
            angles,
        }
    })
}

impl CliffordId {
    pub const IDENTITY: CliffordId = CliffordId(0);

    pub fn new(id: u32) -> Result<Self> {
        if (id as usize) < CLIFFORD_COUNT {
            Ok(CliffordId(id as u8))
        } else {
            Err(Error::InvalidClifford(id))
        }
    }

    pub fn all() -> impl Iterator<Item = CliffordId> {
        (0..CLIFFORD_COUNT as u8).map(CliffordId)
    }

    pub fn hadamard() -> Self {
        Self::from_word("H")
    }

    pub fn phase_gate() -> Self {
        Self::from_word("S")
    }

    fn from_word(w: &str) -> Self {
        let t = table();
        CliffordId(t.words.iter().position(|x| x == w).expect("word in table") as u8)
    }

    /// The element equal (up to phase) to the given Pauli.
    pub fn from_pauli(p: Pauli1) -> Self {
        CliffordId(table().pauli_ids[p.digit()])
    }

    pub fn index(self) -> u32 {
        self.0 as u32
    }

    /// The canonical unitary representative; `id.inverse().matrix()` is
    /// exactly `id.matrix().adjoint()`.
    pub fn matrix(self) -> Matrix2<C64> {
        table().matrices[self.0 as usize]
    }

    /// The generating word in application order.
    pub fn word(self) -> &'static str {
        &table().words[self.0 as usize]
    }

    /// The element whose matrix is `self · rhs` (apply `rhs` first).
    pub fn compose(self, rhs: CliffordId) -> CliffordId {
        CliffordId(table().mul[self.0 as usize][rhs.0 as usize])
    }

    pub fn inverse(self) -> CliffordId {
        CliffordId(table().inv[self.0 as usize])
    }

    /// Image of a Pauli letter under `σ ↦ C σ C†`, as `(sign, letter)`.
    pub fn image(self, p: Pauli1) -> (Phase, Pauli1) {
        let im = &table().images[self.0 as usize];
        match p {
            Pauli1::I => (Phase::One, Pauli1::I),
            Pauli1::X => im[0],
            Pauli1::Z => im[1],
            Pauli1::Y => {
                // Y = iXZ, so CYC† = i·img(X)·img(Z).
                let (sx, lx) = im[0];
                let (sz, lz) = im[1];
                let (lx_x, lx_z) = lx.bits();
                let (lz_x, lz_z) = lz.bits();
                let letter = Pauli1::from_bits(lx_x ^ lz_x, lx_z ^ lz_z);
                let prod = lx.matrix() * lz.matrix();
                let k = (letter.matrix() * prod).trace() / 2.0;
                let k = Phase::from_exponent(if k.re > 0.5 {
                    0
                } else if k.im > 0.5 {
                    1
                } else if k.re < -0.5 {
                    2
                } else {
                    3
                });
                (sx * sz * k * Phase::I, letter)
            }
        }
    }

    /// Z-X-Z-X-Z angles realizing this element up to global phase.
    pub fn angles(self) -> Zxzxz {
        table().angles[self.0 as usize]
    }
}

/// Human-readable table: id, generating word, Pauli images and ZXZXZ angles.
pub fn listing() -> String {
    let mut out = String::from("# id\tword\tX->\tZ->\tpsi\tphi\ttheta\n");
    for id in CliffordId::all() {
        let sign = |p: Phase| if p == Phase::One { '+' } else { '-' };
        let (sx, lx) = id.image(Pauli1::X);
        let (sz, lz) = id.image(Pauli1::Z);
        let a = id.angles();
        let word = if id.word().is_empty() { "-" } else { id.word() };
        out.push_str(&format!(
            "{id}\t{word}\t{}{}\t{}{}\t{:.16e}\t{:.16e}\t{:.16e}\n",
            sign(sx),
            lx.letter(),
            sign(sz),
            lz.letter(),
            a.psi,
            a.phi,
            a.theta
        ));
    }
    out
}

impl fmt::Display for CliffordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
