//! Fragment table files for the SA score.
//!
//! Text format, tab separated:
//!
//! ```text
//! molga-fragments	1
//! kind	counts          (or: kind	scores)
//! source	<free text>   (optional)
//! floor	<value>         (optional, scores tables only)
//! <environment id>	<count or score>
//! ...
//! ```
//!
//! Lines starting with `#` are comments. Count tables are turned into
//! scores by [`FragmentTable::from_counts`]; score tables are used as is.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use molga_core::chem::Perceived;
use molga_core::descriptors::{fragment_counts, FragmentTable};
use molga_core::MoleculeGraph;
use rayon::prelude::*;

use crate::Error;

pub const MAGIC: &str = "molga-fragments";
pub const VERSION: u32 = 1;

/// Counts over the 250k-molecule corpus described in `scripts/`.
pub const BUNDLED_TABLE: &str = include_str!("../data/fragments.tsv");

#[derive(Clone, Debug, PartialEq)]
pub enum TableData {
    Counts(BTreeMap<u32, u64>),
    Scores { scores: BTreeMap<u32, f64>, floor: Option<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableFile {
    pub source: Option<String>,
    pub data: TableData,
}

impl TableFile {
    pub fn into_table(self) -> Result<FragmentTable, Error> {
        match self.data {
            TableData::Counts(c) => FragmentTable::from_counts(c),
            TableData::Scores { scores, floor } => FragmentTable::from_scores(scores, floor),
        }
        .ok_or_else(|| Error::Fragments("table has no entries".into()))
    }
}

pub fn parse_table(text: &str) -> Result<TableFile, Error> {
    let bad = |line: usize, why: &str| Error::Fragments(format!("line {line}: {why}"));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    let (n, header) = lines.next().ok_or_else(|| Error::Fragments("empty file".into()))?;
    match header.split('\t').collect::<Vec<_>>().as_slice() {
        [MAGIC, v] if v.trim().parse::<u32>() == Ok(VERSION) => {}
        [MAGIC, v] => return Err(bad(n + 1, &format!("unsupported version {v}"))),
        _ => return Err(bad(n + 1, "missing molga-fragments header")),
    }
    let mut kind = None;
    let mut source = None;
    let mut floor = None;
    let mut counts = BTreeMap::new();
    let mut scores = BTreeMap::new();
    for (n, line) in lines {
        let (key, value) = line.split_once('\t').ok_or_else(|| bad(n + 1, "expected two tab-separated fields"))?;
        let value = value.trim();
        match key {
            "kind" => kind = Some(value.to_string()),
            "source" => source = Some(value.to_string()),
            "floor" => floor = Some(value.parse::<f64>().map_err(|_| bad(n + 1, "floor is not a number"))?),
            id => {
                let id: u32 = id.parse().map_err(|_| bad(n + 1, "identifier is not a u32"))?;
                match kind.as_deref() {
                    Some("counts") => {
                        counts.insert(id, value.parse().map_err(|_| bad(n + 1, "count is not an integer"))?);
                    }
                    Some("scores") => {
                        scores.insert(id, value.parse().map_err(|_| bad(n + 1, "score is not a number"))?);
                    }
                    Some(k) => return Err(bad(n + 1, &format!("unknown table kind {k}"))),
                    None => return Err(bad(n + 1, "entries before the kind line")),
                }
            }
        }
    }
    let data = match kind.as_deref() {
        Some("counts") => TableData::Counts(counts),
        Some("scores") => TableData::Scores { scores, floor },
        _ => return Err(Error::Fragments("missing kind line".into())),
    };
    Ok(TableFile { source, data })
}

pub fn write_counts(counts: &BTreeMap<u32, u64>, source: &str) -> String {
    let mut out = format!("{MAGIC}\t{VERSION}\nkind\tcounts\nsource\t{source}\n");
    for (id, c) in counts {
        let _ = writeln!(out, "{id}\t{c}");
    }
    out
}

/// `"bundled"` or a file path.
pub fn load_table(path: &str) -> Result<FragmentTable, Error> {
    let text = if path == crate::dataset::BUNDLED_NAME {
        BUNDLED_TABLE.to_string()
    } else {
        fs::read_to_string(path).map_err(|e| Error::io(path, e))?
    };
    parse_table(&text)?.into_table()
}

/// Environment counts summed over `mols`.
pub fn count_fragments<'a>(mols: impl IntoParallelIterator<Item = &'a MoleculeGraph>) -> BTreeMap<u32, u64> {
    mols.into_par_iter()
        .map(|m| fragment_counts(&Perceived::new(m)))
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}
