//! Run directories and the files written into them.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use molga_core::discriminator::DiscriminatorModel;
use molga_core::ga::GenerationStats;
use serde::Serialize;

use crate::config::Kind;
use crate::Error;

pub const TRAJECTORY_HEADER: [&str; 10] = [
    "generation",
    "max_J",
    "mean_J",
    "max_total",
    "beta_used",
    "internal_diversity",
    "fraction_unique",
    "mean_heavy_atoms",
    "mean_D",
    "best_smiles",
];

pub const SCHEDULE_HEADER: [&str; 8] = [
    "generation",
    "beta_used",
    "triggered",
    "mean_total",
    "best_J",
    "window_similarity",
    "discriminator_loss",
    "feasible_count",
];

pub fn trajectory_file(seed: u64) -> String {
    format!("trajectory-s{seed}.csv")
}

pub fn schedule_file(seed: u64) -> String {
    format!("schedule-s{seed}.csv")
}

pub fn population_file(seed: u64) -> String {
    format!("population-s{seed}.smi")
}

pub fn best_file(seed: u64) -> String {
    format!("best-s{seed}.json")
}

pub fn model_file(seed: u64) -> String {
    format!("model-s{seed}.bin")
}

pub fn front_file(seed: u64) -> String {
    format!("front-s{seed}.csv")
}

/// `<out>/<kind>-<UTC timestamp>-s<seed>`, or `<out>/<kind>-s<seed>`
/// emptied first when `overwrite` is set.
pub fn create_run_dir(out: &str, kind: Kind, seed: u64, overwrite: bool) -> Result<PathBuf, Error> {
    let out = Path::new(out);
    if overwrite {
        let dir = out.join(format!("{kind}-s{seed}"));
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        return Ok(dir);
    }
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S");
    let base = format!("{kind}-{stamp}-s{seed}");
    for n in 0.. {
        let name = if n == 0 { base.clone() } else { format!("{base}-{n}") };
        let dir = out.join(name);
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(Error::io(&dir, e)),
        }
    }
    unreachable!()
}

/// Shortest round-trip decimal form; identical on every platform.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV writer flushed after every row so aborted runs keep their rows.
pub struct RowWriter {
    inner: csv::Writer<BufWriter<File>>,
    path: PathBuf,
}

impl RowWriter {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, Error> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut inner = csv::Writer::from_writer(BufWriter::new(file));
        inner.write_record(header)?;
        Ok(RowWriter { inner, path: path.to_path_buf() })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)?;
        self.inner.flush().map_err(|e| Error::io(&self.path, e))
    }
}

pub fn trajectory_row(s: &GenerationStats) -> Vec<String> {
    vec![
        s.generation.to_string(),
        num(s.max_j),
        num(s.mean_j),
        num(s.max_total),
        num(s.beta_used),
        num(s.internal_diversity),
        num(s.fraction_unique),
        num(s.mean_heavy_atoms),
        opt(s.mean_d),
        s.best_smiles.clone(),
    ]
}

pub fn schedule_row(s: &GenerationStats) -> Vec<String> {
    vec![
        s.generation.to_string(),
        num(s.beta_used),
        (s.triggered as u8).to_string(),
        num(s.mean_total),
        num(s.best_j),
        opt(s.window_similarity),
        opt(s.discriminator_loss),
        s.feasible_count.to_string(),
    ]
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Discriminator checkpoint; see [`DiscriminatorModel::to_bytes`] for the
/// layout.
pub fn save_model(path: &Path, model: &DiscriminatorModel) -> Result<(), Error> {
    let mut f = BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    f.write_all(&model.to_bytes()).and_then(|_| f.flush()).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<DiscriminatorModel, Error> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    DiscriminatorModel::from_bytes(&bytes).map_err(|e| Error::Checkpoint(e.to_string()))
}
