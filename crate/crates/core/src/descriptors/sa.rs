//! Synthetic accessibility score: fragment contributions of radius-2
//! circular environments minus complexity penalties, rescaled to [1, 10].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::chem::{MoleculeGraph, Perceived};
use crate::fingerprint::morgan_environments;
use crate::math::{ln, log10, powf};

/// Fragment scores log10(count / n80), where n80 is the number of most
/// frequent fragments covering 80% of all occurrences.
#[derive(Clone, Debug, PartialEq)]
pub struct FragmentTable {
    scores: BTreeMap<u32, f64>,
    floor: f64,
    counts: BTreeMap<u32, u64>,
}

impl FragmentTable {
    /// Builds scores from raw counts; `None` when `counts` is empty.
    pub fn from_counts(counts: BTreeMap<u32, u64>) -> Option<FragmentTable> {
        if counts.is_empty() {
            return None;
        }
        let mut sorted: Vec<(u32, u64)> = counts.iter().map(|(&k, &v)| (k, v)).collect();
        // Descending frequency, ties by id for a stable n80.
        sorted.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let total: u64 = sorted.iter().map(|f| f.1).sum();
        let total80 = total * 8 / 10;
        let mut running = 0;
        let mut n80 = 0usize;
        for (i, f) in sorted.iter().enumerate() {
            running += f.1;
            if running < total80 {
                n80 = i;
            }
        }
        let n80 = n80.max(1) as f64;
        let scores: BTreeMap<u32, f64> = sorted
            .iter()
            .map(|&(k, v)| (k, libm::round(log10(v as f64 / n80) * 1e4) / 1e4))
            .collect();
        let min = scores.values().copied().fold(f64::INFINITY, f64::min);
        Some(FragmentTable { scores, floor: min - 1.0, counts })
    }

    /// Uses precomputed scores directly. Without `floor`, unseen fragments
    /// get the lowest score minus one.
    pub fn from_scores(scores: BTreeMap<u32, f64>, floor: Option<f64>) -> Option<FragmentTable> {
        if scores.is_empty() || scores.values().any(|s| !s.is_finite()) {
            return None;
        }
        let floor = floor.unwrap_or_else(|| scores.values().copied().fold(f64::INFINITY, f64::min) - 1.0);
        Some(FragmentTable { scores, floor, counts: BTreeMap::new() })
    }

    pub fn score(&self, id: u32) -> f64 {
        self.scores.get(&id).copied().unwrap_or(self.floor)
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn scores(&self) -> &BTreeMap<u32, f64> {
        &self.scores
    }

    /// Empty for tables built from scores.
    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }
}

/// Environment id -> occurrence count for one molecule.
pub fn fragment_counts(p: &Perceived<'_>) -> BTreeMap<u32, u64> {
    let mut counts = BTreeMap::new();
    for env in morgan_environments(p, 2) {
        *counts.entry(env.id).or_insert(0) += 1;
    }
    counts
}

/// Intermediate terms of the score, exposed for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaTerms {
    pub fragment: f64,
    pub size_penalty: f64,
    pub spiro: usize,
    pub bridgeheads: usize,
    pub macrocycles: usize,
    pub density: f64,
    pub score: f64,
}

pub fn spiro_and_bridgehead_counts(p: &Perceived<'_>) -> (usize, usize) {
    let rings = &p.rings.rings;
    let mut spiro = BTreeSet::new();
    let mut bridge = BTreeSet::new();
    for i in 0..rings.len() {
        for j in i + 1..rings.len() {
            let shared_atoms: Vec<usize> =
                rings[i].atoms.iter().copied().filter(|a| rings[j].contains_atom(*a)).collect();
            if shared_atoms.len() == 1 {
                spiro.insert(shared_atoms[0]);
                continue;
            }
            let shared_bonds: Vec<usize> =
                rings[i].bonds.iter().copied().filter(|b| rings[j].contains_bond(*b)).collect();
            if shared_bonds.len() > 1 {
                for &a in &shared_atoms {
                    let touching = shared_bonds
                        .iter()
                        .filter(|&&b| {
                            let bond = p.mol.bond(b);
                            bond.a == a || bond.b == a
                        })
                        .count();
                    if touching == 1 {
                        bridge.insert(a);
                    }
                }
            }
        }
    }
    (spiro.len(), bridge.len())
}

pub fn sa_terms(p: &Perceived<'_>, table: &FragmentTable) -> SaTerms {
    let counts = fragment_counts(p);
    let nf: u64 = counts.values().sum();
    let mut fragment = 0.0;
    for (&id, &c) in &counts {
        fragment += table.score(id) * c as f64;
    }
    if nf > 0 {
        fragment /= nf as f64;
    }
    let n = p.mol.heavy_atom_count() as f64;
    let (spiro, bridgeheads) = spiro_and_bridgehead_counts(p);
    let macrocycles = p.rings.rings.iter().filter(|r| r.len() > 8).count();
    let size_penalty = powf(n, 1.005) - n;
    let mut complexity = -size_penalty - log10(spiro as f64 + 1.0) - log10(bridgeheads as f64 + 1.0);
    if macrocycles > 0 {
        complexity -= log10(2.0);
    }
    let bits = counts.len() as f64;
    let density = if n > bits { 0.5 * ln(n / bits) } else { 0.0 };
    let raw = fragment + complexity + density;
    let (min, max) = (-4.0, 2.5);
    let mut score = 11.0 - (raw - min + 1.0) / (max - min) * 9.0;
    if score > 8.0 {
        score = 8.0 + ln(score + 1.0 - 9.0);
    }
    let score = score.clamp(1.0, 10.0);
    SaTerms { fragment, size_penalty, spiro, bridgeheads, macrocycles, density, score }
}

pub fn sa_score_perceived(p: &Perceived<'_>, table: &FragmentTable) -> f64 {
    sa_terms(p, table).score
}

pub fn sa_score(mol: &MoleculeGraph, table: &FragmentTable) -> f64 {
    sa_score_perceived(&Perceived::new(mol), table)
}
