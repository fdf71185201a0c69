//! SMILES datasets: one record per line, an optional whitespace-separated
//! identifier after the SMILES is ignored.

use std::fs;
use std::path::Path;

use molga_core::smiles::parse_smiles;
use molga_core::MoleculeGraph;

use crate::Error;

/// Shipped 1000-molecule ZINC-derived fixture.
pub const BUNDLED_FIXTURE: &str = include_str!("../data/zinc_fixture.smi");
pub const BUNDLED_NAME: &str = "bundled";

/// More unparseable lines than this fraction means the file is probably
/// not a SMILES file at all.
pub const MAX_SKIP_FRACTION: f64 = 0.10;

#[derive(Clone, Debug)]
pub struct Entry {
    /// 1-based line number.
    pub line: usize,
    pub smiles: String,
    pub mol: MoleculeGraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skip {
    pub line: usize,
    pub text: String,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub source: String,
    pub entries: Vec<Entry>,
    pub skips: Vec<Skip>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn molecules(&self) -> impl Iterator<Item = &MoleculeGraph> {
        self.entries.iter().map(|e| &e.mol)
    }

    /// Tab-separated skip log with a header row.
    pub fn skip_log(&self) -> String {
        let mut out = String::from("line\ttext\treason\n");
        for s in &self.skips {
            out.push_str(&format!("{}\t{}\t{}\n", s.line, s.text, s.reason));
        }
        out
    }
}

/// Parses `text`; blank lines and `#` comments are ignored.
pub fn parse_dataset(text: &str, source: &str) -> Result<Dataset, Error> {
    let mut entries = Vec::new();
    let mut skips = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let smiles = trimmed.split_whitespace().next().unwrap_or_default();
        let invalid = |reason: String| Skip { line: i + 1, text: trimmed.to_string(), reason };
        match parse_smiles(smiles) {
            Ok(mol) if mol.validate().is_valid() => entries.push(Entry { line: i + 1, smiles: smiles.to_string(), mol }),
            Ok(mol) => skips.push(invalid(format!("{:?}", mol.validate().violations()))),
            Err(e) => skips.push(invalid(e.to_string())),
        }
    }
    let total = entries.len() + skips.len();
    if total == 0 {
        return Err(Error::Dataset(format!("{source}: no SMILES records")));
    }
    if skips.len() as f64 > MAX_SKIP_FRACTION * total as f64 {
        return Err(Error::Dataset(format!(
            "{source}: {} of {total} lines failed to parse (first: line {}: {})",
            skips.len(),
            skips[0].line,
            skips[0].reason
        )));
    }
    Ok(Dataset { source: source.to_string(), entries, skips })
}

/// Reads a SMILES file, or the bundled fixture for `"bundled"`.
pub fn load_dataset(path: &str) -> Result<Dataset, Error> {
    if path == BUNDLED_NAME {
        return parse_dataset(BUNDLED_FIXTURE, BUNDLED_NAME);
    }
    let text = fs::read_to_string(Path::new(path)).map_err(|e| Error::io(path, e))?;
    parse_dataset(&text, path)
}
