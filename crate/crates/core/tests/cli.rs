use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mcfe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcfe"))
        .args(args)
        .output()
        .unwrap()
}

fn mcfe_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcfe"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("mcfe.toml");
    fs::write(&p, body).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

/// All files under `dir` except manifests, which carry a timestamp.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if !p
                .file_name()
                .unwrap()
                .to_str()
                .unwrap()
                .contains("manifest")
            {
                out.push((
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

const SMALL: &str = "seed = 11\n[target]\nwidth = 3\nlayers = 1\n[sampling]\nsamples_per_ensemble = 4\nbootstrap_resamples = 100\n";

#[test]
fn generate_writes_one_file_per_mirror() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[target]\nwidth = 2\n[sampling]\nsamples_per_ensemble = 1\n",
    );
    let out = tmp.path().join("out");
    let o = mcfe(&["generate", "--config", path(&cfg), "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mirrors: Vec<_> = fs::read_dir(out.join("mirrors")).unwrap().collect();
    assert_eq!(mirrors.len(), 3);
    assert!(out.join("target.txt").exists());
    assert!(out.join("alternating.txt").exists());
    let m = read_json(&out.join("manifest.json"));
    assert_eq!(m["command"], "generate");
    for k in [
        "graph",
        "qaoa_angles",
        "error_model",
        "mirrors",
        "bootstrap",
    ] {
        assert!(m["seeds"][k].is_u64(), "missing seed {k}");
    }
    let first = fs::read_to_string(out.join("mirrors/m1_0000.txt")).unwrap();
    assert!(first.starts_with("# kind=1 seed="));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let mut snaps = Vec::new();
    for name in ["a", "b"] {
        let dir = tmp.path().join(name);
        fs::create_dir(&dir).unwrap();
        for cmd in ["generate", "run", "estimate"] {
            let o = mcfe_in(&dir, &[cmd, "--config", path(&cfg), "--out", "out"]);
            assert_eq!(code(&o), 0, "{cmd}: {}", stderr(&o));
        }
        snaps.push(snapshot(&dir.join("out")));
    }
    assert_eq!(snaps[0], snaps[1]);
    let other = tmp.path().join("c");
    assert_eq!(
        code(&mcfe(&[
            "generate",
            "--config",
            path(&cfg),
            "--seed",
            "12",
            "--out",
            path(&other)
        ])),
        0
    );
    assert_ne!(
        fs::read(other.join("mirrors/m1_0000.txt")).unwrap(),
        fs::read(tmp.path().join("a/out/mirrors/m1_0000.txt")).unwrap()
    );
}

#[test]
fn invalid_config_writes_nothing() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    for body in [
        "[target]\nwidth = 40\n",
        "[target]\nwidht = 3\n",
        "[sampling]\nsamples_per_ensemble = 0\n",
    ] {
        let cfg = write_config(tmp.path(), body);
        let o = mcfe(&["generate", "--config", path(&cfg), "--out", path(&out)]);
        assert_eq!(code(&o), 1, "{body}");
        assert!(stderr(&o).contains("config error"), "{}", stderr(&o));
        assert!(!out.exists());
    }
    assert_eq!(code(&mcfe(&["frobnicate"])), 1);
    assert_eq!(code(&mcfe(&["--help"])), 0);
}

#[test]
fn shots_mode_counts_sum_to_shots() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    assert_eq!(
        code(&mcfe(&[
            "generate",
            "--config",
            path(&cfg),
            "--out",
            path(&out)
        ])),
        0
    );
    let o = mcfe(&[
        "run",
        "--out",
        path(&out),
        "--mode",
        "shots",
        "--shots",
        "250",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(out.join("dataset.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 12);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["mode"], "shots");
        let total: u64 = v["counts"]
            .as_object()
            .unwrap()
            .values()
            .map(|c| c.as_u64().unwrap())
            .sum();
        assert_eq!(total, 250);
    }
    let o = mcfe(&["estimate", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let est = read_json(&out.join("estimate.json"));
    assert_eq!(est["status"], "ok");
    assert_eq!(est["estimate"]["shots"], 250);
}

#[test]
fn corrupted_dataset_reports_line() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    for cmd in ["generate", "run"] {
        assert_eq!(
            code(&mcfe(&[cmd, "--config", path(&cfg), "--out", path(&out)])),
            0
        );
    }
    let ds = out.join("dataset.jsonl");
    let mut lines: Vec<String> = fs::read_to_string(&ds)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    lines[2] = "{\"circuit_id\": oops".into();
    let bad = tmp.path().join("bad.jsonl");
    fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = mcfe(&["estimate", "--out", path(&out), "--dataset", path(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let lines: Vec<String> = fs::read_to_string(&ds)
        .unwrap()
        .lines()
        .filter(|l| !l.contains("\"kind\":3"))
        .map(String::from)
        .collect();
    let partial = tmp.path().join("partial.jsonl");
    fs::write(&partial, lines.join("\n") + "\n").unwrap();
    let o = mcfe(&["estimate", "--out", path(&out), "--dataset", path(&partial)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("kind 3"), "{}", stderr(&o));
}

#[test]
fn noiseless_target_estimates_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), &format!("{SMALL}[noise]\nfamily = \"none\"\n"));
    let out = tmp.path().join("out");
    for cmd in ["generate", "run", "estimate"] {
        let o = mcfe(&[cmd, "--config", path(&cfg), "--out", path(&out)]);
        assert_eq!(code(&o), 0, "{cmd}: {}", stderr(&o));
    }
    let est = read_json(&out.join("estimate.json"));
    assert!((est["estimate"]["chi_f"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(est["gamma_hats"].as_array().unwrap().len(), 3);
}

#[test]
fn undefined_estimate_exits_three() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    // Kind 2 lands on the complement of its target, so its polarization is
    // negative and the estimate is undefined.
    let records = [
        (1, "0", [1.0, 0.0]),
        (2, "0", [0.0, 1.0]),
        (3, "1", [0.0, 1.0]),
    ];
    let body: String = records
        .iter()
        .enumerate()
        .map(|(i, (k, t, d))| {
            format!(
                "{{\"circuit_id\":\"c{i}\",\"kind\":{k},\"seed\":{i},\"target\":\"{t}\",\"mode\":\"exact\",\"distribution\":[{},{}]}}\n",
                d[0], d[1]
            )
        })
        .collect();
    let ds = tmp.path().join("ds.jsonl");
    fs::write(&ds, body).unwrap();
    let o = mcfe(&["estimate", "--out", path(&out), "--dataset", path(&ds)]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let est = read_json(&out.join("estimate.json"));
    assert_eq!(est["status"], "undefined");
    assert!(est.get("estimate").is_none());
}

#[test]
fn validate_writes_results_with_declared_columns() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "seed = 5\n[validate]\nwidths = [2, 3]\nlayers = [1]\ncircuits_per_point = 2\nfamilies = [\"none\", \"S\"]\nsamples_per_ensemble = 20\nbootstrap_resamples = 100\n",
    );
    let out = tmp.path().join("out");
    let o = mcfe(&["validate", "--config", path(&cfg), "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("none"));
    let meta = read_json(&out.join("results.meta.json"));
    let columns: Vec<&str> = meta["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    let mut reader = csv::Reader::from_path(out.join("results.csv")).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, columns);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    for r in rows.iter().filter(|r| &r[0] == "none") {
        assert!((r[6].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
        assert!((r[7].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    }
    let summary = read_json(&out.join("summary.json"));
    assert!(summary["families"].is_array());

    let first = fs::read(out.join("results.csv")).unwrap();
    let again = tmp.path().join("again");
    assert_eq!(
        code(&mcfe(&[
            "validate",
            "--config",
            path(&cfg),
            "--out",
            path(&again),
            "--jobs",
            "1"
        ])),
        0
    );
    assert_eq!(fs::read(again.join("results.csv")).unwrap(), first);
}

#[test]
fn circuit_file_target() {
    let tmp = TempDir::new().unwrap();
    let circuit = tmp.path().join("c.txt");
    fs::write(&circuit, "CIRCUIT n=2\nL c1(0;3) c1(1;5)\nE cnot(0,1)\n").unwrap();
    let cfg = write_config(
        tmp.path(),
        &format!(
            "[target]\ncircuit_file = {:?}\n[sampling]\nsamples_per_ensemble = 2\n",
            path(&circuit)
        ),
    );
    let out = tmp.path().join("out");
    let o = mcfe(&["generate", "--config", path(&cfg), "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let target = fs::read_to_string(out.join("target.txt")).unwrap();
    assert!(target.starts_with("CIRCUIT n=2"));
    let missing = write_config(
        tmp.path(),
        "[target]\ncircuit_file = \"/nonexistent/c.txt\"\n",
    );
    let o = mcfe(&[
        "generate",
        "--config",
        path(&missing),
        "--out",
        path(&tmp.path().join("x")),
    ]);
    assert_eq!(code(&o), 1);
}
