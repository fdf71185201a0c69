use alloc::vec::Vec;

use super::{Alphabet, SelfiesString, SymbolKind};
use crate::chem::{Atom, Bond, BondOrder, Element, MoleculeGraph};

struct Derived {
    element: Element,
    /// Remaining bonding capacity; -1 marks an atom whose state hit 0.
    capacity: i32,
    parent: Option<usize>,
    order: u8,
}

struct Deriver<'a> {
    symbols: &'a [u8],
    alphabet: &'a Alphabet,
    atoms: Vec<Derived>,
    rings: Vec<(usize, usize, u8)>,
}

impl<'a> Deriver<'a> {
    /// Base-16 number from `count` symbols at `*pos`, stopping at `end`;
    /// missing digits read as 0.
    fn read_number(&self, pos: &mut usize, end: usize, count: u8) -> usize {
        let mut n = 0usize;
        for _ in 0..count {
            let mut d = 0;
            if *pos < end {
                d = self.alphabet.symbol(self.symbols[*pos]).digit as usize;
                *pos += 1;
            }
            n = n * 16 + d;
        }
        n
    }

    /// Derives symbols `[start, end)` from `init_state`, attaching to `prev`.
    fn derive(&mut self, start: usize, end: usize, init_state: i32, mut prev: Option<usize>) {
        let mut pos = start;
        let mut state = init_state;
        while pos < end && state >= 0 {
            let sym = self.alphabet.symbol(self.symbols[pos]);
            pos += 1;
            match sym.kind {
                SymbolKind::Branch { digits, bond } => {
                    if state <= 1 {
                        continue;
                    }
                    let n = self.read_number(&mut pos, end, digits);
                    let branch_init = (state - 1).min(bond as i32);
                    let branch_end = (pos + n + 1).min(end);
                    self.derive(pos, branch_end, branch_init, prev);
                    pos = branch_end;
                    state -= branch_init;
                }
                SymbolKind::Ring { digits, bond } => {
                    if state == 0 {
                        continue;
                    }
                    let n = self.read_number(&mut pos, end, digits);
                    if let Some(right) = prev {
                        let left = right.saturating_sub(n + 1);
                        self.rings.push((left, right, bond));
                    }
                }
                SymbolKind::Atom { element, bond } => {
                    let max = element.max_valence() as i32;
                    let (order, next) = if state == 0 {
                        (0, max)
                    } else {
                        let order = (bond as i32).min(state).min(max);
                        let next = max - order;
                        (order, if next == 0 { -1 } else { next })
                    };
                    let idx = self.atoms.len();
                    self.atoms.push(Derived { element, capacity: next, parent: prev, order: order as u8 });
                    if let Some(p) = prev {
                        self.atoms[p].capacity -= order;
                    }
                    prev = Some(idx);
                    state = next;
                }
            }
        }
    }
}

pub fn decode(s: &SelfiesString, alphabet: &Alphabet) -> MoleculeGraph {
    decode_symbols(s.symbols(), alphabet)
}

/// Decodes raw symbol indices. Indices must be valid for `alphabet`.
pub fn decode_symbols(symbols: &[u8], alphabet: &Alphabet) -> MoleculeGraph {
    let mut d = Deriver { symbols, alphabet, atoms: Vec::new(), rings: Vec::new() };
    d.derive(0, symbols.len(), 0, None);
    if d.atoms.is_empty() {
        return MoleculeGraph::methane();
    }

    let mut tree_order: Vec<u8> = d.atoms.iter().map(|a| a.order).collect();
    // (left, right) -> order, in first-formed order
    let mut ring_bonds: Vec<((usize, usize), u8)> = Vec::new();
    for &(left, right, bond) in &d.rings {
        if left == right {
            continue;
        }
        let cap = d.atoms[left].capacity.min(d.atoms[right].capacity);
        if cap <= 0 {
            continue;
        }
        let bond = (bond as i32).min(cap);
        if d.atoms[right].parent == Some(left) {
            tree_order[right] = (tree_order[right] as i32 + bond).min(3) as u8;
        } else if let Some(entry) = ring_bonds.iter_mut().find(|(k, _)| *k == (left, right)) {
            entry.1 = (entry.1 as i32 + bond).min(3) as u8;
        } else {
            ring_bonds.push(((left, right), bond as u8));
        }
        d.atoms[left].capacity -= bond;
        d.atoms[right].capacity -= bond;
    }

    let atoms: Vec<Atom> = d.atoms.iter().map(|a| Atom::new(a.element)).collect();
    let mut bonds = Vec::with_capacity(atoms.len() + ring_bonds.len());
    for (i, a) in d.atoms.iter().enumerate() {
        if let Some(p) = a.parent {
            bonds.push(Bond { a: p, b: i, order: to_order(tree_order[i]) });
        }
    }
    for ((l, r), order) in ring_bonds {
        bonds.push(Bond { a: l, b: r, order: to_order(order) });
    }
    let mut mol = MoleculeGraph::from_parts(atoms, bonds);
    mol.saturate_hydrogens();
    mol
}

fn to_order(v: u8) -> BondOrder {
    BondOrder::from_u8(v).unwrap_or(BondOrder::Single)
}
