//! Morgan (circular) fingerprints, Tanimoto similarity and the diversity
//! metrics used for per-generation logging.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chem::{CanonicalKey, MoleculeGraph, Perceived};
use crate::hash::{combine, hash_pair, hash_range};

pub const DEFAULT_WIDTH: usize = 2048;
pub const DEFAULT_RADIUS: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FingerprintError {
    ZeroWidth,
    WidthMismatch { left: usize, right: usize },
    RadiusMismatch { left: u32, right: u32 },
    EmptySet,
}

impl fmt::Display for FingerprintError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FingerprintError::ZeroWidth => write!(f, "fingerprint width must be positive"),
            FingerprintError::WidthMismatch { left, right } => {
                write!(f, "fingerprint widths differ ({left} vs {right})")
            }
            FingerprintError::RadiusMismatch { left, right } => {
                write!(f, "fingerprint radii differ ({left} vs {right})")
            }
            FingerprintError::EmptySet => write!(f, "metric needs at least one molecule"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FingerprintError {}

/// Fixed-width bit vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    words: Vec<u64>,
    width: usize,
    radius: u32,
}

impl Fingerprint {
    pub fn zeros(width: usize, radius: u32) -> Result<Self, FingerprintError> {
        if width == 0 {
            return Err(FingerprintError::ZeroWidth);
        }
        Ok(Fingerprint { words: vec![0; width.div_ceil(64)], width, radius })
    }

    pub fn from_bits(bits: impl IntoIterator<Item = usize>, width: usize, radius: u32) -> Result<Self, FingerprintError> {
        let mut fp = Self::zeros(width, radius)?;
        for b in bits {
            fp.set(b % width);
        }
        Ok(fp)
    }

    #[inline]
    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    #[inline]
    pub fn get(&self, bit: usize) -> bool {
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(|&i| self.get(i))
    }

    fn check(&self, other: &Fingerprint) -> Result<(), FingerprintError> {
        if self.width != other.width {
            return Err(FingerprintError::WidthMismatch { left: self.width, right: other.width });
        }
        if self.radius != other.radius {
            return Err(FingerprintError::RadiusMismatch { left: self.radius, right: other.radius });
        }
        Ok(())
    }
}

/// One circular environment: its identifier, radius and centre atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Environment {
    pub id: u32,
    pub radius: u32,
    pub atom: usize,
}

/// Bond type codes: 1, 2, 3 for Kekulé orders, 12 for aromatic bonds.
fn bond_code(p: &Perceived<'_>, bond: usize) -> u32 {
    if p.aromatic.bonds[bond] {
        12
    } else {
        p.mol.bond(bond).order.value() as u32
    }
}

/// Radius-0 invariant: element, total degree, hydrogen count, charge,
/// mass shift (always 0 here) and a ring flag present only for ring atoms.
fn atom_invariant(p: &Perceived<'_>, i: usize) -> u32 {
    let a = p.mol.atom(i);
    let mut parts = vec![
        a.element.atomic_number() as u32,
        p.mol.total_degree(i) as u32,
        a.hydrogens as u32,
        a.charge as i32 as u32,
        0,
    ];
    if p.rings.atom_in_ring[i] {
        parts.push(1);
    }
    hash_range(&parts)
}

/// Circular environments up to `radius`. Every atom contributes at radius
/// 0. At larger radii an environment is kept only if its bond set has not
/// been seen before; an atom whose environment repeats one already seen
/// stops growing.
pub fn morgan_environments(p: &Perceived<'_>, radius: u32) -> Vec<Environment> {
    let mol = p.mol;
    let n = mol.atom_count();
    let mut ids: Vec<u32> = (0..n).map(|i| atom_invariant(p, i)).collect();
    let mut out: Vec<Environment> = (0..n).map(|atom| Environment { id: ids[atom], radius: 0, atom }).collect();
    let words = mol.bond_count().div_ceil(64).max(1);
    let mut hoods: Vec<Vec<u64>> = vec![vec![0; words]; n];
    // Radius-0 environments cover no bonds, so an isolated atom never adds more.
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::from([vec![0; words]]);
    let mut dead = vec![false; n];
    let mut next_ids = ids.clone();
    for r in 1..=radius {
        let mut next_hoods = hoods.clone();
        let mut round: Vec<(Vec<u64>, u32, usize)> = Vec::new();
        for i in 0..n {
            if dead[i] {
                continue;
            }
            let mut nb: Vec<(u32, u32)> = Vec::with_capacity(mol.degree(i));
            for &(j, b) in mol.neighbors(i) {
                let hood = &mut next_hoods[i];
                hood[b / 64] |= 1 << (b % 64);
                for (w, o) in hood.iter_mut().zip(&hoods[j]) {
                    *w |= o;
                }
                nb.push((bond_code(p, b), ids[j]));
            }
            nb.sort_unstable();
            let mut h = r - 1;
            combine(&mut h, ids[i]);
            for (code, id) in nb {
                combine(&mut h, hash_pair(code, id));
            }
            next_ids[i] = h;
            round.push((next_hoods[i].clone(), h, i));
        }
        round.sort();
        for (hood, id, atom) in round {
            if seen.contains(&hood) {
                dead[atom] = true;
            } else {
                seen.insert(hood);
                out.push(Environment { id, radius: r, atom });
            }
        }
        ids.copy_from_slice(&next_ids);
        hoods = next_hoods;
    }
    out
}

pub fn morgan_fp_perceived(p: &Perceived<'_>, radius: u32, width: usize) -> Result<Fingerprint, FingerprintError> {
    let envs = morgan_environments(p, radius);
    Fingerprint::from_bits(envs.iter().map(|e| e.id as usize), width, radius)
}

pub fn morgan_fp(mol: &MoleculeGraph, radius: u32, width: usize) -> Result<Fingerprint, FingerprintError> {
    if width == 0 {
        return Err(FingerprintError::ZeroWidth);
    }
    morgan_fp_perceived(&Perceived::new(mol), radius, width)
}

/// |a ∧ b| / |a ∨ b|, defined as 1 for two empty vectors.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    a.check(b)?;
    Ok(tanimoto_unchecked(a, b))
}

#[inline]
fn tanimoto_unchecked(a: &Fingerprint, b: &Fingerprint) -> f64 {
    let (mut both, mut either) = (0u32, 0u32);
    for (x, y) in a.words.iter().zip(&b.words) {
        both += (x & y).count_ones();
        either += (x | y).count_ones();
    }
    if either == 0 {
        1.0
    } else {
        both as f64 / either as f64
    }
}

/// Mean Tanimoto distance over ordered pairs. With `include_diagonal`
/// the self-pairs count (sum over |A|² pairs); otherwise the mean runs
/// over the |A|(|A|-1) off-diagonal pairs.
pub fn internal_diversity(set: &[Fingerprint], include_diagonal: bool) -> Result<f64, FingerprintError> {
    if set.is_empty() {
        return Err(FingerprintError::EmptySet);
    }
    for fp in &set[1..] {
        set[0].check(fp)?;
    }
    let n = set.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += 1.0 - tanimoto_unchecked(&set[i], &set[j]);
            }
        }
    }
    let pairs = if include_diagonal { (n * n) as f64 } else { (n * (n - 1)) as f64 };
    if pairs == 0.0 {
        return Ok(0.0);
    }
    Ok(sum / pairs)
}

/// Mean pairwise similarity over unordered distinct pairs; 1 for a
/// single fingerprint.
pub fn mean_pairwise_similarity(set: &[Fingerprint]) -> Result<f64, FingerprintError> {
    if set.is_empty() {
        return Err(FingerprintError::EmptySet);
    }
    for fp in &set[1..] {
        set[0].check(fp)?;
    }
    let n = set.len();
    if n == 1 {
        return Ok(1.0);
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += tanimoto_unchecked(&set[i], &set[j]);
        }
    }
    Ok(sum / (n * (n - 1) / 2) as f64)
}

/// Distinct keys divided by population size.
pub fn fraction_unique(keys: &[CanonicalKey]) -> Result<f64, FingerprintError> {
    if keys.is_empty() {
        return Err(FingerprintError::EmptySet);
    }
    let distinct: BTreeSet<&CanonicalKey> = keys.iter().collect();
    Ok(distinct.len() as f64 / keys.len() as f64)
}
