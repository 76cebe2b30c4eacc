use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::{sample_er_graph, WeightRange};
use super::qaoa::{qaoa_circuit, QaoaParams};
use crate::circuit::{to_alternating_form, Circuit};
use crate::error::{Error, Result};
use crate::estimator::{
    estimate_fidelity, histogram_polarization, FidelityEstimate, GammaEstimate, HammingHistogram,
    MIN_RESAMPLES,
};
use crate::randomization::{sample_ensemble, MirrorKind, MirrorSample};
use crate::seed::{rng_from_seed, split_seed, streams};
use crate::simulator::{
    circuit_fidelity_oracle, output_distribution, sample_shots, ErrorModel, Family, DENSE_LIMIT,
};

/// How mirror circuits are "measured".
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// Exact outcome distributions (infinitely many shots).
    Exact,
    /// This many shots per circuit.
    Shots(u64),
}

impl SimMode {
    pub fn shots(self) -> Option<u64> {
        match self {
            SimMode::Exact => None,
            SimMode::Shots(k) => Some(k),
        }
    }
}

/// Effective polarization of one simulated mirror circuit.
pub fn mirror_polarization(s: &MirrorSample, model: &ErrorModel, mode: SimMode) -> Result<f64> {
    let dist = output_distribution(&s.circuit, model)?;
    let hist = match mode {
        SimMode::Exact => HammingHistogram::from_distribution(&dist, &s.target),
        SimMode::Shots(k) => {
            let mut rng = rng_from_seed(split_seed(s.seed, streams::SHOTS, 0));
            let rec = sample_shots(&dist, k, s.seed.to_string(), &mut rng);
            HammingHistogram::from_record(&rec, &s.target)?
        }
    };
    Ok(histogram_polarization(&hist))
}

/// Samples `samples` mirror circuits of each kind from `seed`, simulates
/// them under `model`, and combines the results.
pub fn estimate_circuit_fidelity(
    c: &Circuit,
    model: &ErrorModel,
    samples: usize,
    mode: SimMode,
    resamples: usize,
    seed: u64,
) -> Result<FidelityEstimate> {
    if samples == 0 {
        return Err(Error::EmptyInput("mirror ensemble".into()));
    }
    if mode == SimMode::Shots(0) {
        return Err(Error::invalid("shots per circuit must be positive"));
    }
    let ct = to_alternating_form(c)?;
    let mut ensembles = Vec::with_capacity(3);
    for kind in MirrorKind::ALL {
        let circuits = sample_ensemble(kind, c, &ct, samples, seed)?;
        let values = circuits
            .par_iter()
            .map(|s| mirror_polarization(s, model, mode))
            .collect::<Result<Vec<_>>>()?;
        ensembles.push(GammaEstimate::from_values(values)?);
    }
    estimate_fidelity(
        [&ensembles[0], &ensembles[1], &ensembles[2]],
        c.width(),
        mode.shots(),
        resamples,
        split_seed(seed, streams::BOOTSTRAP, 0),
    )
}

/// A validation sweep over QAOA circuits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub widths: Vec<usize>,
    pub layers: Vec<usize>,
    pub circuits_per_point: usize,
    pub families: Vec<Family>,
    pub samples_per_ensemble: usize,
    pub mode: SimMode,
    pub edge_probability: f64,
    pub weights: WeightRange,
    pub bootstrap_resamples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            widths: vec![3, 4, 5],
            layers: vec![1, 2, 5],
            circuits_per_point: 10,
            families: Family::BENCHMARK_FAMILIES.to_vec(),
            samples_per_ensemble: 300,
            mode: SimMode::Exact,
            edge_probability: 0.5,
            weights: WeightRange::default(),
            bootstrap_resamples: 200,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid(m));
        if self.widths.is_empty() || self.layers.is_empty() || self.families.is_empty() {
            return bad("widths, layers and families must be non-empty".into());
        }
        if let Some(&n) = self
            .widths
            .iter()
            .find(|&&n| !(2..=DENSE_LIMIT).contains(&n))
        {
            return bad(format!("widths: {n} is outside 2..={DENSE_LIMIT}"));
        }
        if self.layers.contains(&0) {
            return bad("layers: every entry must be positive".into());
        }
        if self.circuits_per_point == 0 {
            return bad("circuits_per_point must be positive".into());
        }
        if self.samples_per_ensemble == 0 {
            return bad("samples_per_ensemble must be positive".into());
        }
        if self.mode == SimMode::Shots(0) {
            return bad("shots must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return bad(format!(
                "edge_probability {} outside [0, 1]",
                self.edge_probability
            ));
        }
        if !(self.weights.low <= self.weights.high) {
            return bad("weights: low must not exceed high".into());
        }
        if self.bootstrap_resamples < MIN_RESAMPLES {
            return bad(format!(
                "bootstrap_resamples must be at least {MIN_RESAMPLES}"
            ));
        }
        Ok(())
    }
}

/// One benchmark circuit under one error-model family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub family: Family,
    pub n: usize,
    pub p: usize,
    pub circuit: usize,
    pub edges: usize,
    pub cnots: usize,
    pub fidelity: Option<f64>,
    pub chi_f: Option<f64>,
    pub success_ratio: Option<f64>,
    pub bootstrap_sd: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub gamma3: Option<f64>,
    pub relative_error: Option<f64>,
    pub circuit_seed: u64,
    pub model_seed: u64,
    pub mirror_seed: u64,
    /// Empty, `out_of_range`, or an error message.
    pub flag: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
}

fn family_code(f: Family) -> u64 {
    match f {
        Family::S => 0,
        Family::H => 1,
        Family::SH => 2,
        Family::H2Q => 3,
        Family::None => 4,
        Family::Depolarizing => 5,
    }
}

fn run_row(
    cfg: &ExperimentConfig,
    family: Family,
    n: usize,
    p: usize,
    index: usize,
) -> ExperimentRow {
    let circuit_seed = split_seed(
        cfg.seed,
        streams::ROW,
        ((n as u64) << 40) | ((p as u64) << 20) | index as u64,
    );
    let model_seed = split_seed(circuit_seed, streams::ERROR_MODEL, family_code(family));
    let mirror_seed = split_seed(circuit_seed, streams::MIRROR, family_code(family));
    let mut row = ExperimentRow {
        family,
        n,
        p,
        circuit: index,
        edges: 0,
        cnots: 0,
        fidelity: None,
        chi_f: None,
        success_ratio: None,
        bootstrap_sd: None,
        gamma1: None,
        gamma2: None,
        gamma3: None,
        relative_error: None,
        circuit_seed,
        model_seed,
        mirror_seed,
        flag: String::new(),
    };
    let built = (|| -> Result<(Circuit, usize)> {
        let mut grng = rng_from_seed(split_seed(circuit_seed, streams::GRAPH, 0));
        let g = sample_er_graph(n, cfg.edge_probability, cfg.weights, &mut grng)?;
        let mut arng = rng_from_seed(split_seed(circuit_seed, streams::QAOA_ANGLES, 0));
        let params = QaoaParams::random(p, &mut arng)?;
        Ok((qaoa_circuit(&g, &params)?, g.edges().len()))
    })();
    let (c, edges) = match built {
        Ok(x) => x,
        Err(e) => {
            row.flag = format!("error: {e}");
            return row;
        }
    };
    row.edges = edges;
    row.cnots = c.cnot_count();
    let model = ErrorModel::sample(family, n, &mut rng_from_seed(model_seed));
    match circuit_fidelity_oracle(&c, &model) {
        Ok(f) => row.fidelity = Some(f),
        Err(e) => {
            row.flag = format!("error: {e}");
            return row;
        }
    }
    match estimate_circuit_fidelity(
        &c,
        &model,
        cfg.samples_per_ensemble,
        cfg.mode,
        cfg.bootstrap_resamples,
        mirror_seed,
    ) {
        Ok(est) => {
            row.chi_f = Some(est.chi_f);
            row.success_ratio = est.success_ratio;
            row.bootstrap_sd = Some(est.bootstrap_sd);
            [row.gamma1, row.gamma2, row.gamma3] = est.gamma_hats.map(Some);
            row.relative_error = row.fidelity.map(|f| (est.chi_f - f) / f);
            if est.out_of_range {
                row.flag = "out_of_range".into();
            }
        }
        Err(Error::EstimateUndefined(m)) => row.flag = format!("undefined: {m}"),
        Err(e) => row.flag = format!("error: {e}"),
    }
    row
}

/// Runs every (family, width, layers, circuit) combination. Rows come back
/// in that nesting order regardless of scheduling; failures are recorded in
/// the row's flag instead of aborting the sweep.
pub fn run_mcfe_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let mut keys = Vec::new();
    for &family in &cfg.families {
        for &n in &cfg.widths {
            for &p in &cfg.layers {
                for i in 0..cfg.circuits_per_point {
                    keys.push((family, n, p, i));
                }
            }
        }
    }
    let rows = keys
        .par_iter()
        .map(|&(family, n, p, i)| run_row(cfg, family, n, p, i))
        .collect();
    Ok(ExperimentResult {
        config: cfg.clone(),
        rows,
    })
}

/// Accuracy statistics for one family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: Family,
    pub rows: usize,
    pub flagged: usize,
    /// Largest `|χ̂_F − F|/F` over rows with `F ≥ 0.75`.
    pub max_rel_error_f75: Option<f64>,
    /// Largest `|χ̂_F − F|/F` over rows with `F ≥ 0.5`.
    pub max_rel_error_f50: Option<f64>,
    /// Rows with `F ≥ 0.05`, and how many violate `F/2 < χ̂_F < 2F`.
    pub envelope_rows: usize,
    pub envelope_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub families: Vec<FamilySummary>,
}

pub const S_TOLERANCE_F75: f64 = 0.01;
pub const S_TOLERANCE_F50: f64 = 0.05;
pub const ENVELOPE_PASS_FRACTION: f64 = 0.99;

fn worst(rows: &[&ExperimentRow], floor: f64) -> Option<f64> {
    rows.iter()
        .filter(|r| r.fidelity.is_some_and(|f| f >= floor))
        .map(|r| r.relative_error.map_or(f64::INFINITY, f64::abs))
        .reduce(f64::max)
}

impl ExperimentResult {
    pub fn summary(&self) -> ValidationSummary {
        let mut families = Vec::new();
        for &family in &self.config.families {
            let rows: Vec<&ExperimentRow> =
                self.rows.iter().filter(|r| r.family == family).collect();
            let env: Vec<_> = rows
                .iter()
                .filter(|r| r.fidelity.is_some_and(|f| f >= 0.05))
                .collect();
            let failures = env
                .iter()
                .filter(|r| match (r.fidelity, r.chi_f) {
                    (Some(f), Some(x)) => !(x > 0.5 * f && x < 2.0 * f),
                    _ => true,
                })
                .count();
            families.push(FamilySummary {
                family,
                rows: rows.len(),
                flagged: rows.iter().filter(|r| !r.flag.is_empty()).count(),
                max_rel_error_f75: worst(&rows, 0.75),
                max_rel_error_f50: worst(&rows, 0.5),
                envelope_rows: env.len(),
                envelope_failures: failures,
            });
        }
        ValidationSummary { families }
    }
}

impl FamilySummary {
    pub fn envelope_ok(&self) -> bool {
        self.envelope_failures as f64 <= (1.0 - ENVELOPE_PASS_FRACTION) * self.envelope_rows as f64
    }

    /// The relative-error thresholds; only enforced for the S family.
    pub fn accuracy_ok(&self) -> bool {
        self.family != Family::S
            || (self.max_rel_error_f75.is_none_or(|e| e <= S_TOLERANCE_F75)
                && self.max_rel_error_f50.is_none_or(|e| e <= S_TOLERANCE_F50))
    }
}

impl ValidationSummary {
    pub fn passes(&self) -> bool {
        self.families
            .iter()
            .all(|f| f.envelope_ok() && f.accuracy_ok())
    }
}
