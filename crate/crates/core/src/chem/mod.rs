//! Molecular graphs with implicit hydrogens, ring perception, aromaticity
//! perception and canonical keys.

mod aromatic;
mod canon;
mod element;
mod graph;
mod rings;

pub use aromatic::Aromaticity;
pub use canon::{canonical_key, canonical_ranks, canonical_smiles, CanonicalKey};
pub use element::{implicit_hydrogens, Element};
pub use graph::{Atom, Bond, BondOrder, GraphError, MoleculeGraph, Validity, Violation, ViolationKind};
pub use rings::{bridges, max_ring_size, Ring, RingInfo};

/// Structural view shared by the descriptor and fingerprint code.
#[derive(Clone, Debug)]
pub struct Perceived<'a> {
    pub mol: &'a MoleculeGraph,
    pub rings: RingInfo,
    pub aromatic: Aromaticity,
}

impl<'a> Perceived<'a> {
    pub fn new(mol: &'a MoleculeGraph) -> Self {
        let rings = RingInfo::perceive(mol);
        let aromatic = Aromaticity::perceive(mol, &rings);
        Perceived { mol, rings, aromatic }
    }
}
