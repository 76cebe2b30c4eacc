//! QAOA MaxCut benchmark circuits and the fidelity-validation sweep.

mod experiment;
mod graph;
mod qaoa;

pub use experiment::{
    estimate_circuit_fidelity, run_mcfe_experiment, ExperimentConfig, ExperimentResult,
    ExperimentRow, FamilySummary, SimMode, ValidationSummary,
};
pub use graph::{sample_er_graph, WeightRange, WeightedGraph};
pub use qaoa::{qaoa_circuit, QaoaParams};
