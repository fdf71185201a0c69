use alloc::vec;
use alloc::vec::Vec;

use super::element::Element;
use super::graph::{BondOrder, MoleculeGraph};
use super::rings::RingInfo;

/// Aromatic atoms and bonds perceived from a kekulized graph.
///
/// Used by descriptors and fingerprints only; the graph itself never
/// stores aromatic bonds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Aromaticity {
    pub atoms: Vec<bool>,
    pub bonds: Vec<bool>,
}

impl Aromaticity {
    pub fn perceive(mol: &MoleculeGraph, rings: &RingInfo) -> Self {
        let electrons: Vec<Option<u8>> =
            (0..mol.atom_count()).map(|i| pi_electrons(mol, rings, i)).collect();
        let mut atoms = vec![false; mol.atom_count()];
        let mut bonds = vec![false; mol.bond_count()];
        let eligible: Vec<bool> = rings
            .rings
            .iter()
            .map(|r| r.len() <= 8 && r.atoms.iter().all(|&a| electrons[a].is_some()))
            .collect();
        let count = |ring_atoms: &mut dyn Iterator<Item = usize>| -> u32 {
            ring_atoms.map(|a| electrons[a].unwrap_or(0) as u32).sum()
        };
        let huckel = |e: u32| e >= 2 && (e - 2) % 4 == 0;
        let mut aromatic_ring = vec![false; rings.rings.len()];
        for (i, ring) in rings.rings.iter().enumerate() {
            if eligible[i] && huckel(count(&mut ring.atoms.iter().copied())) {
                aromatic_ring[i] = true;
                for &a in &ring.atoms {
                    atoms[a] = true;
                }
                for &b in &ring.bonds {
                    bonds[b] = true;
                }
            }
        }
        // Connected combinations of fused rings that fail individually,
        // e.g. azulene or quinones fused across several rings.
        let nr = rings.rings.len();
        let fused = |i: usize, j: usize| rings.rings[i].bonds.iter().any(|b| rings.rings[j].contains_bond(*b));
        for system in fused_systems(nr, &fused) {
            let members: Vec<usize> = system.into_iter().filter(|&r| eligible[r]).collect();
            if members.len() < 2 || members.len() > MAX_FUSED {
                continue;
            }
            for mask in 1u32..(1 << members.len()) {
                if mask.count_ones() < 2 {
                    continue;
                }
                let chosen: Vec<usize> =
                    (0..members.len()).filter(|k| mask & (1 << k) != 0).map(|k| members[k]).collect();
                if chosen.iter().all(|&r| aromatic_ring[r]) || !connected(&chosen, &fused) {
                    continue;
                }
                let mut union: Vec<usize> =
                    chosen.iter().flat_map(|&r| rings.rings[r].atoms.iter().copied()).collect();
                union.sort_unstable();
                union.dedup();
                if huckel(count(&mut union.iter().copied())) {
                    for &a in &union {
                        atoms[a] = true;
                    }
                    // Bonds interior to the combination stay as they are.
                    let mut uses: Vec<(usize, u32)> = Vec::new();
                    for &r in &chosen {
                        aromatic_ring[r] = true;
                        for &b in &rings.rings[r].bonds {
                            match uses.iter_mut().find(|u| u.0 == b) {
                                Some(u) => u.1 += 1,
                                None => uses.push((b, 1)),
                            }
                        }
                    }
                    for (b, n) in uses {
                        if n == 1 {
                            bonds[b] = true;
                        }
                    }
                }
            }
        }
        Aromaticity { atoms, bonds }
    }

    pub fn any(&self) -> bool {
        self.atoms.iter().any(|&a| a)
    }
}

/// Largest fused system whose ring combinations are enumerated.
const MAX_FUSED: usize = 10;

/// Groups ring indices into systems linked by shared bonds.
fn fused_systems(n: usize, fused: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut system = vec![start];
        let mut k = 0;
        while k < system.len() {
            let r = system[k];
            for o in 0..n {
                if !seen[o] && fused(r, o) {
                    seen[o] = true;
                    system.push(o);
                }
            }
            k += 1;
        }
        system.sort_unstable();
        out.push(system);
    }
    out
}

fn connected(chosen: &[usize], fused: &dyn Fn(usize, usize) -> bool) -> bool {
    let mut reached = vec![false; chosen.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(k) = stack.pop() {
        for o in 0..chosen.len() {
            if !reached[o] && fused(chosen[k], chosen[o]) {
                reached[o] = true;
                stack.push(o);
            }
        }
    }
    reached.iter().all(|&r| r)
}

/// Pi electrons an atom donates to a ring, or `None` when it cannot take
/// part in an aromatic system.
fn pi_electrons(mol: &MoleculeGraph, rings: &RingInfo, i: usize) -> Option<u8> {
    if !rings.atom_in_ring[i] {
        return None;
    }
    let atom = mol.atom(i);
    if !atom.element.can_be_aromatic() {
        return None;
    }
    let mut doubles = 0;
    let mut exo_double: Option<Element> = None;
    for &(nbr, b) in mol.neighbors(i) {
        match mol.bond(b).order {
            BondOrder::Double => {
                doubles += 1;
                if !rings.bond_in_ring[b] {
                    exo_double = Some(mol.atom(nbr).element);
                }
            }
            BondOrder::Triple => return None,
            BondOrder::Single => {}
        }
    }
    if doubles > 1 {
        return None;
    }
    if let Some(other) = exo_double {
        // An exocyclic double bond to a more electronegative atom leaves
        // the p orbital empty.
        return if electronegativity(other) > electronegativity(atom.element) { Some(0) } else { Some(1) };
    }
    if doubles == 1 {
        return Some(1);
    }
    let total = mol.total_degree(i);
    match (atom.element, atom.charge) {
        (Element::C, -1) => Some(2),
        (Element::C, 1) => Some(0),
        (Element::N | Element::P, 0) if total == 3 => Some(2),
        (Element::O | Element::S, 0) if total == 2 => Some(2),
        _ => None,
    }
}

/// Pauling electronegativity.
fn electronegativity(e: Element) -> f64 {
    match e {
        Element::C => 2.55,
        Element::N => 3.04,
        Element::O => 3.44,
        Element::F => 3.98,
        Element::P => 2.19,
        Element::S => 2.58,
        Element::Cl => 3.16,
        Element::Br => 2.96,
    }
}
