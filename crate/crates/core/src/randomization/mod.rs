//! Local twirl layers, randomized compilation and mirror-circuit ensembles.

mod compile;
mod mirror;

pub use compile::{compile_with_paulis, randomized_compile, RandomCompilation};
pub use mirror::{
    build_mirror, build_mirror_with, ensemble_seed, parse_mirror_sample, sample_ensemble,
    MirrorKind, MirrorSample,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, Layer};
use crate::clifford::{CliffordId, CLIFFORD_COUNT};

/// One uniformly random single-qubit Clifford per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTwirlLayer {
    ids: Vec<CliffordId>,
}

impl LocalTwirlLayer {
    pub fn new(ids: Vec<CliffordId>) -> Self {
        Self { ids }
    }

    pub fn width(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[CliffordId] {
        &self.ids
    }

    pub fn to_layer(&self) -> Layer {
        let gates = self
            .ids
            .iter()
            .enumerate()
            .map(|(q, &id)| Gate::clifford(q, id))
            .collect();
        Layer::local(self.ids.len(), gates).expect("one gate per qubit")
    }

    /// The matched inverse `L_rev`.
    pub fn inverse_layer(&self) -> Layer {
        LocalTwirlLayer::new(self.ids.iter().map(|id| id.inverse()).collect()).to_layer()
    }
}

pub fn sample_local_layer<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LocalTwirlLayer {
    LocalTwirlLayer {
        ids: (0..n)
            .map(|_| CliffordId::new(rng.gen_range(0..CLIFFORD_COUNT as u32)).expect("in range"))
            .collect(),
    }
}
