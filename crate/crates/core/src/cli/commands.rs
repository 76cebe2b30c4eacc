use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Config, ModeName};
use super::dataset::{read_dataset_file, write_dataset, DatasetRecord, Outcomes};
use super::manifest::{RunManifest, MANIFEST_FILE};
use super::{Command, Common, EXIT_CHECK_FAILED, EXIT_OK, EXIT_UNDEFINED};
use crate::bench::{
    qaoa_circuit, run_mcfe_experiment, sample_er_graph, ExperimentRow, QaoaParams, SimMode,
};
use crate::circuit::{parse_circuit, serialize_circuit, to_alternating_form, Circuit};
use crate::error::{Error, Result};
use crate::estimator::{estimate_fidelity, GammaEstimate};
use crate::randomization::{parse_mirror_sample, sample_ensemble, MirrorKind};
use crate::seed::{rng_from_seed, split_seed, streams};
use crate::simulator::{output_distribution, sample_shots, ErrorModel, SIM_LIMIT};

const TARGET_FILE: &str = "target.txt";
const ALTERNATING_FILE: &str = "alternating.txt";
const CLIFFORD_FILE: &str = "cliffords.txt";
const MODEL_FILE: &str = "error_model.json";
const DATASET_FILE: &str = "dataset.jsonl";
const RUN_MANIFEST_FILE: &str = "run_manifest.json";
const ESTIMATE_FILE: &str = "estimate.json";
const RESULTS_FILE: &str = "results.csv";
const RESULTS_META_FILE: &str = "results.meta.json";
const SUMMARY_FILE: &str = "summary.json";

pub(super) fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Generate(common) => {
            setup(&common)?;
            generate(&common)
        }
        Command::Run {
            common,
            mode,
            shots,
        } => {
            setup(&common)?;
            run(&common, mode, shots)
        }
        Command::Estimate { common, dataset } => {
            setup(&common)?;
            estimate(&common, dataset)
        }
        Command::Validate {
            common,
            mode,
            shots,
            check,
        } => {
            setup(&common)?;
            validate(&common, mode, shots, check)
        }
    }
}

fn setup(common: &Common) -> Result<()> {
    if let Some(j) = common.jobs {
        if j == 0 {
            return Err(Error::invalid("--jobs must be positive"));
        }
        // A pool may already exist when several commands share a process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global();
    }
    Ok(())
}

fn load_config(common: &Common) -> Result<Config> {
    let mut cfg = match &common.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn apply_mode(cfg: &mut Config, mode: Option<ModeName>, shots: Option<u64>) -> Result<()> {
    if let Some(m) = mode {
        cfg.sampling.mode = m;
    }
    if let Some(k) = shots {
        if k == 0 {
            return Err(Error::invalid("--shots must be positive"));
        }
        cfg.sampling.shots = k;
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn target_circuit(cfg: &Config, seeds: &mut BTreeMap<String, u64>) -> Result<Circuit> {
    let t = &cfg.target;
    if let Some(path) = &t.circuit_file {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Config(format!(
                "target.circuit_file: cannot read {}: {e}",
                path.display()
            ))
        })?;
        let c = parse_circuit(&text)?;
        if c.width() == 0 || c.width() > SIM_LIMIT {
            return Err(Error::Config(format!(
                "target.circuit_file: width {} outside 1..={SIM_LIMIT}",
                c.width()
            )));
        }
        return Ok(c);
    }
    let graph_seed = split_seed(cfg.seed, streams::GRAPH, 0);
    let angle_seed = split_seed(cfg.seed, streams::QAOA_ANGLES, 0);
    seeds.insert("graph".into(), graph_seed);
    seeds.insert("qaoa_angles".into(), angle_seed);
    let g = sample_er_graph(
        t.width,
        t.edge_probability,
        t.weights,
        &mut rng_from_seed(graph_seed),
    )?;
    let params = QaoaParams::random(t.layers, &mut rng_from_seed(angle_seed))?;
    qaoa_circuit(&g, &params)
}

fn mirror_file(kind: MirrorKind, index: usize) -> String {
    format!("mirrors/m{}_{index:04}.txt", kind.number())
}

fn generate(common: &Common) -> Result<i32> {
    let cfg = load_config(common)?;
    let mut manifest = RunManifest::new("generate", &cfg);
    // Everything is computed before the first write so invalid input leaves
    // the output directory untouched.
    let c = target_circuit(&cfg, &mut manifest.seeds)?;
    let ct = to_alternating_form(&c)?;
    let n = c.width();
    let model_seed = split_seed(cfg.seed, streams::ERROR_MODEL, 0);
    let model = ErrorModel::sample(cfg.noise.family, n, &mut rng_from_seed(model_seed));
    let mirror_seed = split_seed(cfg.seed, streams::MIRROR, 0);
    manifest.seeds.insert("error_model".into(), model_seed);
    manifest.seeds.insert("mirrors".into(), mirror_seed);
    manifest.seeds.insert(
        "bootstrap".into(),
        split_seed(mirror_seed, streams::BOOTSTRAP, 0),
    );
    let mut files: Vec<(String, String)> = vec![
        (TARGET_FILE.into(), serialize_circuit(&c)),
        (ALTERNATING_FILE.into(), serialize_circuit(ct.circuit())),
        (CLIFFORD_FILE.into(), crate::clifford::listing()),
        (MODEL_FILE.into(), model.to_json()? + "\n"),
    ];
    for kind in MirrorKind::ALL {
        let samples = sample_ensemble(
            kind,
            &c,
            &ct,
            cfg.sampling.samples_per_ensemble,
            mirror_seed,
        )?;
        for (i, s) in samples.iter().enumerate() {
            files.push((mirror_file(kind, i), s.to_text()));
        }
    }
    fs::create_dir_all(common.out.join("mirrors"))?;
    for (name, body) in &files {
        fs::write(common.out.join(name), body)?;
        manifest.outputs.push(name.clone());
    }
    manifest.write(&common.out.join(MANIFEST_FILE))?;
    println!(
        "wrote {} files for a {n}-qubit target ({} mirror circuits per kind) to {}",
        files.len(),
        cfg.sampling.samples_per_ensemble,
        common.out.display()
    );
    Ok(EXIT_OK)
}

fn simulate_record(
    id: &str,
    text: &str,
    model: &ErrorModel,
    mode: SimMode,
) -> Result<DatasetRecord> {
    let s = parse_mirror_sample(text)?;
    let dist = output_distribution(&s.circuit, model)?;
    let outcomes = match mode {
        SimMode::Exact => Outcomes::Exact {
            distribution: dist.probabilities().to_vec(),
        },
        SimMode::Shots(k) => {
            let mut rng = rng_from_seed(split_seed(s.seed, streams::SHOTS, 0));
            let rec = sample_shots(&dist, k, id, &mut rng);
            Outcomes::Shots {
                counts: rec.counts,
                shots: rec.shots,
            }
        }
    };
    Ok(DatasetRecord {
        circuit_id: id.to_string(),
        kind: s.kind,
        seed: s.seed,
        target: s.target,
        outcomes,
    })
}

fn run(common: &Common, mode: Option<ModeName>, shots: Option<u64>) -> Result<i32> {
    let gen = RunManifest::read(&common.out.join(MANIFEST_FILE))?;
    let mut cfg = gen.config.clone();
    apply_mode(&mut cfg, mode, shots)?;
    let model_text = fs::read_to_string(common.out.join(MODEL_FILE))
        .map_err(|e| Error::Data(format!("cannot read {MODEL_FILE}: {e}")))?;
    let model = ErrorModel::from_json(&model_text)?;
    let sim_mode = cfg.sampling.sim_mode();
    let inputs: Vec<(String, PathBuf)> = gen
        .outputs
        .iter()
        .filter(|f| f.starts_with("mirrors/"))
        .map(|f| {
            let id = Path::new(f)
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            (id, common.out.join(f))
        })
        .collect();
    let records = inputs
        .par_iter()
        .map(|(id, path)| {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
            simulate_record(id, &text, &model, sim_mode).map_err(|e| match e {
                Error::WidthLimit { .. } => e,
                other => Error::Data(format!("{}: {other}", path.display())),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let file = fs::File::create(common.out.join(DATASET_FILE))?;
    write_dataset(&records, file)?;
    let mut manifest = RunManifest::new("run", &cfg);
    manifest.seeds = gen.seeds.clone();
    manifest.outputs.push(DATASET_FILE.into());
    manifest.write(&common.out.join(RUN_MANIFEST_FILE))?;
    println!(
        "simulated {} mirror circuits into {}",
        records.len(),
        DATASET_FILE
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimate: Option<crate::estimator::FidelityEstimate>,
    gamma_hats: [f64; 3],
    counts: [usize; 3],
    bootstrap_seed: u64,
    dataset: String,
}

fn estimate(common: &Common, dataset: Option<PathBuf>) -> Result<i32> {
    let manifest_path = common.out.join(MANIFEST_FILE);
    let (cfg, bootstrap_seed) = if manifest_path.exists() && common.config.is_none() {
        let m = RunManifest::read(&manifest_path)?;
        let seed = m.seed("bootstrap")?;
        (m.config, seed)
    } else {
        let cfg = load_config(common)?;
        let seed = split_seed(
            split_seed(cfg.seed, streams::MIRROR, 0),
            streams::BOOTSTRAP,
            0,
        );
        (cfg, seed)
    };
    let path = dataset.unwrap_or_else(|| common.out.join(DATASET_FILE));
    let records = read_dataset_file(&path)?;
    let n = records
        .first()
        .map(|r| r.target.len())
        .ok_or_else(|| Error::Data(format!("{} has no records", path.display())))?;
    if let Some(r) = records.iter().find(|r| r.target.len() != n) {
        return Err(Error::Data(format!(
            "record {} has a different width than the first record",
            r.circuit_id
        )));
    }
    let mut per_kind: [Vec<f64>; 3] = Default::default();
    for r in &records {
        per_kind[r.kind.number() as usize - 1].push(r.polarization()?);
    }
    if let Some(k) = per_kind.iter().position(Vec::is_empty) {
        return Err(Error::Data(format!(
            "dataset has no records for mirror kind {}",
            k + 1
        )));
    }
    let ensembles = per_kind.map(|v| GammaEstimate::from_values(v).expect("non-empty"));
    let shots = {
        let ks: Vec<Option<u64>> = records
            .iter()
            .map(|r| match r.outcomes {
                Outcomes::Shots { shots, .. } => Some(shots),
                Outcomes::Exact { .. } => None,
            })
            .collect();
        if ks.windows(2).all(|w| w[0] == w[1]) {
            ks[0]
        } else {
            None
        }
    };
    let mut report = EstimateReport {
        status: "ok",
        message: None,
        estimate: None,
        gamma_hats: [0, 1, 2].map(|i| ensembles[i].gamma),
        counts: [0, 1, 2].map(|i| ensembles[i].per_circuit.len()),
        bootstrap_seed,
        dataset: path.display().to_string(),
    };
    let code = match estimate_fidelity(
        [&ensembles[0], &ensembles[1], &ensembles[2]],
        n,
        shots,
        cfg.sampling.bootstrap_resamples,
        bootstrap_seed,
    ) {
        Ok(est) => {
            println!(
                "chi_F = {:.6} (bootstrap sd {:.6}); gammas = {:.6} {:.6} {:.6}{}",
                est.chi_f,
                est.bootstrap_sd,
                est.gamma_hats[0],
                est.gamma_hats[1],
                est.gamma_hats[2],
                if est.out_of_range {
                    " [outside 0..1]"
                } else {
                    ""
                }
            );
            report.estimate = Some(est);
            EXIT_OK
        }
        Err(Error::EstimateUndefined(m)) => {
            eprintln!("estimate undefined: {m}");
            report.status = "undefined";
            report.message = Some(m);
            EXIT_UNDEFINED
        }
        Err(e) => return Err(e),
    };
    fs::create_dir_all(&common.out)?;
    write_json(&common.out.join(ESTIMATE_FILE), &report)?;
    Ok(code)
}

#[derive(Serialize)]
struct ResultsMeta<'a> {
    tool: &'a str,
    version: &'a str,
    experiment: &'a crate::bench::ExperimentConfig,
    config: &'a Config,
    columns: &'a [&'a str],
    created_unix: u64,
}

const COLUMNS: [&str; 18] = [
    "family",
    "n",
    "p",
    "circuit",
    "edges",
    "cnots",
    "fidelity",
    "chi_f",
    "success_ratio",
    "bootstrap_sd",
    "gamma1",
    "gamma2",
    "gamma3",
    "relative_error",
    "circuit_seed",
    "model_seed",
    "mirror_seed",
    "flag",
];

fn write_rows(path: &Path, rows: &[ExperimentRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.4}"))
}

fn validate(
    common: &Common,
    mode: Option<ModeName>,
    shots: Option<u64>,
    check: bool,
) -> Result<i32> {
    let mut cfg = load_config(common)?;
    apply_mode(&mut cfg, mode, shots)?;
    let exp = cfg.experiment(cfg.sampling.sim_mode());
    let result = run_mcfe_experiment(&exp)?;
    fs::create_dir_all(&common.out)?;
    write_rows(&common.out.join(RESULTS_FILE), &result.rows)?;
    let manifest = RunManifest::new("validate", &cfg);
    write_json(
        &common.out.join(RESULTS_META_FILE),
        &ResultsMeta {
            tool: &manifest.tool,
            version: &manifest.version,
            experiment: &exp,
            config: &cfg,
            columns: &COLUMNS,
            created_unix: manifest.created_unix,
        },
    )?;
    let summary = result.summary();
    write_json(&common.out.join(SUMMARY_FILE), &summary)?;
    println!("family  rows  flagged  max|rel err| F>=0.75  F>=0.5  envelope failures");
    for f in &summary.families {
        println!(
            "{:<7} {:>4}  {:>7}  {:>19}  {:>6}  {}/{}",
            f.family.name(),
            f.rows,
            f.flagged,
            fmt_opt(f.max_rel_error_f75),
            fmt_opt(f.max_rel_error_f50),
            f.envelope_failures,
            f.envelope_rows
        );
    }
    if check && !summary.passes() {
        eprintln!("acceptance check failed");
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}
