//! Mirror-circuit fidelity estimation.
//!
//! Builds randomized mirror circuits from a target circuit, simulates them
//! under configurable Markovian error models, and estimates the target's
//! entanglement fidelity from the results. Small-width exact oracles for the
//! true fidelity are included so the estimator can be validated.

pub mod bench;
pub mod bits;
pub mod circuit;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod estimator;
pub mod linalg;
pub mod pauli;
pub mod randomization;
pub mod seed;
pub mod simulator;

pub use bits::BitString;
pub use circuit::{AlternatingCircuit, Circuit, Gate, Layer, LayerKind};
pub use clifford::CliffordId;
pub use error::{Error, Result};
pub use pauli::{PauliChannel, PauliOperator};
