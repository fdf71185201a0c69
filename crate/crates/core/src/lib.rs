//! Core algorithms for evolving molecules as SELFIES strings.
//!
//! Everything in this crate is pure computation over owned data and builds
//! without `std` (an allocator is required). File formats, dataset loading,
//! and the command-line runner live in the companion `molga` crate.
//!
//! Module map:
//!
//! - [`chem`]: molecular graphs, ring perception, aromaticity, canonical keys
//! - [`smiles`]: SMILES subset parser and canonical writer
//! - [`selfies`]: alphabets, the derivation decoder, encoder and sampler
//! - [`descriptors`]: Crippen logP, SA score, ring penalty and penalized logP
//! - [`fingerprint`]: Morgan fingerprints, Tanimoto and diversity metrics
//! - [`discriminator`]: feedforward classifier trained with BCE and Adam
//! - [`ga`]: the genetic algorithm, penalty schedules and Pareto utilities

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod chem;
pub mod descriptors;
pub mod discriminator;
pub mod fingerprint;
pub mod ga;
mod hash;
pub mod math;
pub mod selfies;
pub mod smiles;

pub use chem::{Atom, Bond, BondOrder, CanonicalKey, Element, MoleculeGraph};
pub use selfies::{Alphabet, SelfiesString};

/// Seeded random generator used throughout the crate.
///
/// ChaCha8 gives identical streams on every platform for a given seed.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the crate's generator from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}
