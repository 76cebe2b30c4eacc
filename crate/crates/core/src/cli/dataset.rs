//! Line-delimited JSON outcome datasets.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::estimator::{histogram_polarization, HammingHistogram};
use crate::randomization::MirrorKind;
use crate::simulator::{OutcomeDistribution, ShotRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Outcomes {
    /// Probabilities indexed by basis state.
    Exact { distribution: Vec<f64> },
    Shots {
        counts: BTreeMap<BitString, u64>,
        shots: u64,
    },
}

/// One simulated mirror circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub circuit_id: String,
    pub kind: MirrorKind,
    pub seed: u64,
    pub target: BitString,
    #[serde(flatten)]
    pub outcomes: Outcomes,
}

impl DatasetRecord {
    pub fn validate(&self) -> Result<()> {
        let n = self.target.len();
        match &self.outcomes {
            Outcomes::Exact { distribution } => {
                OutcomeDistribution::new(n, distribution.clone())?;
            }
            Outcomes::Shots { counts, shots } => {
                let rec = ShotRecord {
                    circuit_id: self.circuit_id.clone(),
                    counts: counts.clone(),
                    shots: *shots,
                };
                rec.validate()?;
                if *shots == 0 {
                    return Err(Error::Data(format!(
                        "record {}: zero shots",
                        self.circuit_id
                    )));
                }
                if rec.width().is_some_and(|w| w != n) {
                    return Err(Error::Data(format!(
                        "record {}: outcome width differs from target width {n}",
                        self.circuit_id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Effective polarization of this record.
    pub fn polarization(&self) -> Result<f64> {
        let n = self.target.len();
        let hist = match &self.outcomes {
            Outcomes::Exact { distribution } => HammingHistogram::from_distribution(
                &OutcomeDistribution::new(n, distribution.clone())?,
                &self.target,
            ),
            Outcomes::Shots { counts, shots } => HammingHistogram::from_record(
                &ShotRecord {
                    circuit_id: self.circuit_id.clone(),
                    counts: counts.clone(),
                    shots: *shots,
                },
                &self.target,
            )?,
        };
        Ok(histogram_polarization(&hist))
    }
}

pub fn write_dataset<W: Write>(records: &[DatasetRecord], out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records one per line. Blank lines are skipped; errors name the
/// offending line.
pub fn read_dataset<R: Read>(input: R) -> Result<Vec<DatasetRecord>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: DatasetRecord = serde_json::from_str(&line)
            .map_err(|e| Error::parse(i + 1, e.column(), e.to_string()))?;
        rec.validate()
            .map_err(|e| Error::parse(i + 1, 1, e.to_string()))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_dataset_file(path: &Path) -> Result<Vec<DatasetRecord>> {
    let f = std::fs::File::open(path)
        .map_err(|e| Error::Data(format!("cannot open {}: {e}", path.display())))?;
    read_dataset(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact() -> DatasetRecord {
        DatasetRecord {
            circuit_id: "m1_0000".into(),
            kind: MirrorKind::M1,
            seed: 17,
            target: "01".parse().unwrap(),
            outcomes: Outcomes::Exact {
                distribution: vec![0.1, 0.7, 0.1, 0.1],
            },
        }
    }

    #[test]
    fn round_trip_both_modes() {
        let shots = DatasetRecord {
            outcomes: Outcomes::Shots {
                counts: BTreeMap::from([("01".parse().unwrap(), 9), ("11".parse().unwrap(), 1)]),
                shots: 10,
            },
            ..exact()
        };
        let mut buf = Vec::new();
        write_dataset(&[exact(), shots.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"mode\":\"exact\""));
        assert_eq!(read_dataset(&buf[..]).unwrap(), vec![exact(), shots]);
    }

    #[test]
    fn corrupted_line_is_reported() {
        let mut buf = Vec::new();
        write_dataset(&[exact(), exact()], &mut buf).unwrap();
        buf.extend_from_slice(b"{\"circuit_id\": 3}\n");
        match read_dataset(&buf[..]) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad = b"{\"circuit_id\":\"x\",\"kind\":1,\"seed\":1,\"target\":\"0\",\"mode\":\"shots\",\"counts\":{\"0\":2},\"shots\":3}\n";
        assert!(matches!(
            read_dataset(&bad[..]),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn polarization_of_perfect_record() {
        let r = DatasetRecord {
            outcomes: Outcomes::Exact {
                distribution: vec![0.0, 1.0, 0.0, 0.0],
            },
            ..exact()
        };
        assert!((r.polarization().unwrap() - 1.0).abs() < 1e-15);
    }
}
