//! Plot-data bundles: tidy long-format CSVs (metric, generation, seed,
//! value) and a JSON manifest, written to `<run>/report/`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Kind, RunConfig, RESOLVED_FILE};
use crate::output::*;
use crate::Error;

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub kind: String,
    pub seeds: Vec<u64>,
    pub source_files: Vec<String>,
    pub outputs: Vec<String>,
    pub metrics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pareto: Option<serde_json::Value>,
}

fn expected_files(kind: Kind, seeds: &[u64]) -> Vec<String> {
    let mut files = vec!["summary.json".to_string()];
    for &s in seeds {
        match kind {
            Kind::Baseline => files.push(format!("samples-s{s}.csv")),
            Kind::Constrained => {}
            _ => files.push(trajectory_file(s)),
        }
        if kind == Kind::Pareto {
            files.push(front_file(s));
        }
    }
    match kind {
        Kind::Constrained => files.push("results.csv".into()),
        Kind::Pareto => files.extend(["pareto.json".into(), "dataset_front.csv".into()]),
        _ => {}
    }
    files
}

struct Long {
    writer: RowWriter,
    metrics: Vec<String>,
}

impl Long {
    fn push(&mut self, metric: &str, generation: &str, seed: &str, value: &str) -> Result<(), Error> {
        if value.is_empty() {
            return Ok(());
        }
        if !self.metrics.iter().any(|m| m == metric) {
            self.metrics.push(metric.to_string());
        }
        self.writer.row([metric, generation, seed, value])
    }
}

fn read_csv(path: &Path) -> Result<(csv::StringRecord, Vec<csv::StringRecord>), Error> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    let rows = r.records().collect::<Result<Vec<_>, _>>()?;
    Ok((header, rows))
}

/// Builds the bundle for a finished run directory.
pub fn cmd_report(run: &Path) -> Result<PathBuf, Error> {
    let resolved = run.join(RESOLVED_FILE);
    if !resolved.is_file() {
        return Err(Error::MissingFiles { dir: run.display().to_string(), missing: vec![RESOLVED_FILE.into()] });
    }
    let config = RunConfig::load(&resolved.to_string_lossy())?;
    let kind = config.kind().ok_or_else(|| Error::Config("config.resolved names no command".into()))?;
    let seeds = config.seeds();
    let files = expected_files(kind, &seeds);
    let missing: Vec<String> = files.iter().filter(|f| !run.join(f).is_file()).cloned().collect();
    if !missing.is_empty() {
        return Err(Error::MissingFiles { dir: run.display().to_string(), missing });
    }
    let out = run.join("report");
    fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    let mut long = Long {
        writer: RowWriter::create(&out.join("long.csv"), &["metric", "generation", "seed", "value"])?,
        metrics: Vec::new(),
    };
    let mut outputs = vec!["long.csv".to_string()];
    let mut pareto = None;
    match kind {
        Kind::Baseline => {
            for &s in &seeds {
                let (header, rows) = read_csv(&run.join(format!("samples-s{s}.csv")))?;
                for row in &rows {
                    for (name, value) in header.iter().zip(row.iter()) {
                        if matches!(name, "J" | "logP" | "SA" | "ring_penalty" | "heavy_atoms") {
                            long.push(name, "0", &s.to_string(), value)?;
                        }
                    }
                }
            }
        }
        Kind::Constrained => {
            let (header, rows) = read_csv(&run.join("results.csv"))?;
            let gens = config.ga.generations.unwrap_or_default().to_string();
            for row in &rows {
                let seed = row.get(0).unwrap_or_default();
                for (name, value) in header.iter().zip(row.iter()) {
                    if matches!(name, "improvement" | "best_J" | "target_J" | "similarity" | "success") {
                        long.push(name, &gens, seed, value)?;
                    }
                }
            }
        }
        _ => {
            for &s in &seeds {
                let (header, rows) = read_csv(&run.join(trajectory_file(s)))?;
                for row in &rows {
                    let generation = row.get(0).unwrap_or_default();
                    for (name, value) in header.iter().zip(row.iter()).skip(1) {
                        if name != "best_smiles" {
                            long.push(name, generation, &s.to_string(), value)?;
                        }
                    }
                }
            }
        }
    }
    if kind == Kind::Pareto {
        let mut w = RowWriter::create(&out.join("pareto_points.csv"), &["set", "smiles", "J", "neg_heavy_atoms"])?;
        let sets = std::iter::once(("dataset".to_string(), run.join("dataset_front.csv")))
            .chain(seeds.iter().map(|s| (format!("s{s}"), run.join(front_file(*s)))));
        for (set, path) in sets {
            let (_, rows) = read_csv(&path)?;
            for row in &rows {
                w.row([set.as_str(), &row[0], &row[1], &row[2]])?;
            }
        }
        outputs.push("pareto_points.csv".into());
        let text = fs::read_to_string(run.join("pareto.json")).map_err(|e| Error::io(run.join("pareto.json"), e))?;
        pareto = Some(serde_json::from_str(&text)?);
    }
    let manifest = Manifest {
        kind: kind.as_str().into(),
        seeds,
        source_files: files,
        outputs,
        metrics: long.metrics,
        pareto,
    };
    write_json(&out.join("manifest.json"), &manifest)?;
    Ok(out)
}
