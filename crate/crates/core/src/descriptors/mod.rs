//! Property calculators and the penalized-logP fitness
//! J = z(logP) - z(SA) - z(ring penalty).

mod crippen;
mod sa;

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

pub use crippen::{crippen_contributions, crippen_logp, crippen_logp_perceived, crippen_types};
pub use sa::{
    fragment_counts, sa_score, sa_score_perceived, sa_terms, spiro_and_bridgehead_counts, FragmentTable, SaTerms,
};

use crate::chem::{canonical_key, MoleculeGraph, Perceived, RingInfo};

/// Penalty for rings larger than six atoms: excess size of the largest
/// ring of the minimum cycle basis.
pub fn ring_penalty(mol: &MoleculeGraph) -> f64 {
    ring_penalty_from(&RingInfo::perceive(mol))
}

pub fn ring_penalty_from(rings: &RingInfo) -> f64 {
    rings.max_ring_size().saturating_sub(6) as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    #[inline]
    pub fn z(&self, x: f64) -> f64 {
        (x - self.mean) / self.std
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizationParams {
    pub logp: MeanStd,
    pub sa: MeanStd,
    pub ring: MeanStd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizationError {
    NonPositiveStd(&'static str),
    TooFewSamples,
}

impl fmt::Display for NormalizationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizationError::NonPositiveStd(c) => write!(f, "standard deviation of {c} must be positive"),
            NormalizationError::TooFewSamples => write!(f, "need at least two molecules to estimate normalization"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NormalizationError {}

impl Default for NormalizationParams {
    /// Constants of the ZINC-250k reference set.
    fn default() -> Self {
        NormalizationParams {
            logp: MeanStd { mean: 2.47, std: 1.42 },
            sa: MeanStd { mean: 3.05, std: 0.831 },
            ring: MeanStd { mean: 0.038, std: 0.224 },
        }
    }
}

impl NormalizationParams {
    pub fn new(logp: MeanStd, sa: MeanStd, ring: MeanStd) -> Result<Self, NormalizationError> {
        for (name, c) in [("logP", logp), ("SA", sa), ("ring penalty", ring)] {
            if !(c.std > 0.0) {
                return Err(NormalizationError::NonPositiveStd(name));
            }
        }
        Ok(NormalizationParams { logp, sa, ring })
    }

    /// Means and population standard deviations of raw descriptors.
    pub fn from_samples(samples: &[RawDescriptors]) -> Result<Self, NormalizationError> {
        if samples.len() < 2 {
            return Err(NormalizationError::TooFewSamples);
        }
        let stats = |f: fn(&RawDescriptors) -> f64| {
            let v: alloc::vec::Vec<f64> = samples.iter().map(f).collect();
            MeanStd { mean: crate::math::mean(&v), std: crate::math::std_dev(&v) }
        };
        Self::new(stats(|r| r.logp), stats(|r| r.sa), stats(|r| r.ring_penalty))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawDescriptors {
    pub logp: f64,
    pub sa: f64,
    pub ring_penalty: f64,
}

/// Fitness of one molecule. `total` is J, or J + beta * D when a
/// discriminator score is attached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitnessRecord {
    pub raw: RawDescriptors,
    pub logp_z: f64,
    pub sa_z: f64,
    pub ring_z: f64,
    pub j: f64,
    pub d: Option<f64>,
    pub beta: f64,
    pub total: f64,
}

impl FitnessRecord {
    pub fn from_raw(raw: RawDescriptors, params: &NormalizationParams) -> Self {
        let logp_z = params.logp.z(raw.logp);
        let sa_z = params.sa.z(raw.sa);
        let ring_z = params.ring.z(raw.ring_penalty);
        let j = logp_z - sa_z - ring_z;
        FitnessRecord { raw, logp_z, sa_z, ring_z, j, d: None, beta: 0.0, total: j }
    }

    pub fn with_discriminator(mut self, d: f64, beta: f64) -> Self {
        self.d = Some(d);
        self.beta = beta;
        self.total = self.j + beta * d;
        self
    }

    /// Replaces the total with a fixed value (constraint rejection).
    pub fn with_total(mut self, total: f64) -> Self {
        self.total = total;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescriptorError {
    /// The precomputed table has no entry for this canonical key.
    MissingEntry(String),
}

impl fmt::Display for DescriptorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescriptorError::MissingEntry(k) => write!(f, "no precomputed descriptors for {k}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DescriptorError {}

/// Source of raw logP / SA / ring-penalty values.
pub trait DescriptorProvider: Sync {
    fn raw(&self, mol: &MoleculeGraph) -> Result<RawDescriptors, DescriptorError>;
}

/// Built-in calculators.
#[derive(Clone, Debug)]
pub struct BuiltinDescriptors {
    pub fragments: FragmentTable,
}

impl BuiltinDescriptors {
    pub fn new(fragments: FragmentTable) -> Self {
        BuiltinDescriptors { fragments }
    }
}

impl DescriptorProvider for BuiltinDescriptors {
    fn raw(&self, mol: &MoleculeGraph) -> Result<RawDescriptors, DescriptorError> {
        let p = Perceived::new(mol);
        Ok(RawDescriptors {
            logp: crippen_logp_perceived(&p),
            sa: sa_score_perceived(&p, &self.fragments),
            ring_penalty: ring_penalty_from(&p.rings),
        })
    }
}

/// Values looked up by canonical key, e.g. computed by an external
/// toolkit. Ring penalty is always computed.
#[derive(Clone, Debug, Default)]
pub struct PrecomputedDescriptors {
    table: BTreeMap<String, (f64, f64)>,
}

impl PrecomputedDescriptors {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, mol: &MoleculeGraph, logp: f64, sa: f64) {
        self.table.insert(canonical_key(mol).into_string(), (logp, sa));
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl DescriptorProvider for PrecomputedDescriptors {
    fn raw(&self, mol: &MoleculeGraph) -> Result<RawDescriptors, DescriptorError> {
        let key = canonical_key(mol).into_string();
        let &(logp, sa) = self.table.get(&key).ok_or(DescriptorError::MissingEntry(key))?;
        Ok(RawDescriptors { logp, sa, ring_penalty: ring_penalty(mol) })
    }
}

pub fn penalized_logp(
    mol: &MoleculeGraph,
    params: &NormalizationParams,
    provider: &dyn DescriptorProvider,
) -> Result<FitnessRecord, DescriptorError> {
    Ok(FitnessRecord::from_raw(provider.raw(mol)?, params))
}
