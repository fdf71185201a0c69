//! SMILES subset reader and canonical writer.
//!
//! Accepted: organic-subset atoms `C N O F S P Cl Br` and aromatic
//! `c n o s p`, bracket atoms of those elements with hydrogen count and
//! charge, explicit `[H]` atoms (folded into their neighbour), bonds `- = # :`, branches, ring closures `1`-`9` and `%nn`,
//! and `.` between components. Aromatic input is kekulized. Anything
//! else (isotopes, chirality, directional bonds, atom classes, other
//! elements) is rejected with the byte offset of the offending character.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chem::{
    bridges, canonical_smiles, implicit_hydrogens, Atom, Bond, BondOrder, Element, MoleculeGraph,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmilesErrorKind {
    Empty,
    UnexpectedEnd,
    UnexpectedChar(char),
    UnsupportedElement(String),
    Unsupported(&'static str),
    UnmatchedParen,
    UnclosedRing(u32),
    RingBondConflict(u32),
    RingSelfBond(u32),
    DuplicateBond,
    BondWithoutAtom,
    Kekulization,
    Valence(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmilesError {
    pub offset: usize,
    pub kind: SmilesErrorKind,
}

impl fmt::Display for SmilesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SmilesErrorKind::Empty => write!(f, "empty SMILES"),
            SmilesErrorKind::UnexpectedEnd => write!(f, "unexpected end of input at byte {}", self.offset),
            SmilesErrorKind::UnexpectedChar(c) => {
                write!(f, "unexpected character {c:?} at byte {}", self.offset)
            }
            SmilesErrorKind::UnsupportedElement(s) => {
                write!(f, "unsupported element {s:?} at byte {}", self.offset)
            }
            SmilesErrorKind::Unsupported(what) => write!(f, "{what} not supported (byte {})", self.offset),
            SmilesErrorKind::UnmatchedParen => write!(f, "unmatched parenthesis at byte {}", self.offset),
            SmilesErrorKind::UnclosedRing(d) => write!(f, "ring bond {d} opened at byte {} never closed", self.offset),
            SmilesErrorKind::RingBondConflict(d) => {
                write!(f, "conflicting bond orders on ring bond {d} at byte {}", self.offset)
            }
            SmilesErrorKind::RingSelfBond(d) => write!(f, "ring bond {d} closes on its own atom at byte {}", self.offset),
            SmilesErrorKind::DuplicateBond => write!(f, "duplicate bond at byte {}", self.offset),
            SmilesErrorKind::BondWithoutAtom => write!(f, "bond symbol without a following atom at byte {}", self.offset),
            SmilesErrorKind::Kekulization => write!(f, "aromatic system cannot be kekulized"),
            SmilesErrorKind::Valence(atom) => write!(f, "valence exceeded on atom {atom} (byte {})", self.offset),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SmilesError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RawBond {
    Implicit,
    Single,
    Double,
    Triple,
    Aromatic,
}

struct RawAtom {
    element: Element,
    aromatic: bool,
    charge: i8,
    /// Some for bracket atoms.
    hydrogens: Option<u8>,
    /// `[H]` atoms bonded to this one, folded in after parsing.
    attached_h: u8,
    /// This is itself a `[H]` atom.
    is_hydrogen: bool,
    offset: usize,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    atoms: Vec<RawAtom>,
    bonds: Vec<(usize, usize, RawBond, usize)>,
}

impl<'a> Parser<'a> {
    fn err(&self, offset: usize, kind: SmilesErrorKind) -> SmilesError {
        SmilesError { offset, kind }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn add_bond(&mut self, a: usize, b: usize, kind: RawBond, offset: usize) -> Result<(), SmilesError> {
        if self.bonds.iter().any(|&(x, y, _, _)| (x == a && y == b) || (x == b && y == a)) {
            return Err(self.err(offset, SmilesErrorKind::DuplicateBond));
        }
        self.bonds.push((a, b, kind, offset));
        Ok(())
    }

    fn parse(&mut self) -> Result<(), SmilesError> {
        let mut prev: Option<usize> = None;
        let mut branch_stack: Vec<(usize, usize)> = Vec::new();
        let mut pending: Option<(RawBond, usize)> = None;
        let mut open_rings: Vec<Option<(usize, RawBond, usize)>> = vec![None; 100];
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                b'(' => {
                    let Some(p) = prev else {
                        return Err(self.err(start, SmilesErrorKind::UnexpectedChar('(')));
                    };
                    if pending.is_some() {
                        return Err(self.err(start, SmilesErrorKind::BondWithoutAtom));
                    }
                    branch_stack.push((p, start));
                    self.pos += 1;
                }
                b')' => {
                    let Some((p, _)) = branch_stack.pop() else {
                        return Err(self.err(start, SmilesErrorKind::UnmatchedParen));
                    };
                    if pending.is_some() {
                        return Err(self.err(start, SmilesErrorKind::BondWithoutAtom));
                    }
                    prev = Some(p);
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' => {
                    if prev.is_none() || pending.is_some() {
                        return Err(self.err(start, SmilesErrorKind::UnexpectedChar(c as char)));
                    }
                    let kind = match c {
                        b'-' => RawBond::Single,
                        b'=' => RawBond::Double,
                        b'#' => RawBond::Triple,
                        _ => RawBond::Aromatic,
                    };
                    pending = Some((kind, start));
                    self.pos += 1;
                }
                b'/' | b'\\' => return Err(self.err(start, SmilesErrorKind::Unsupported("directional bond"))),
                b'$' => return Err(self.err(start, SmilesErrorKind::Unsupported("quadruple bond"))),
                b'.' => {
                    if prev.is_none() || pending.is_some() {
                        return Err(self.err(start, SmilesErrorKind::UnexpectedChar('.')));
                    }
                    prev = None;
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => {
                    let Some(p) = prev else {
                        return Err(self.err(start, SmilesErrorKind::UnexpectedChar(c as char)));
                    };
                    let digit = if c == b'%' {
                        let d = self.bytes.get(start + 1..start + 3);
                        match d {
                            Some(&[a, b]) if a.is_ascii_digit() && b.is_ascii_digit() => {
                                self.pos += 3;
                                ((a - b'0') * 10 + (b - b'0')) as u32
                            }
                            _ => return Err(self.err(start, SmilesErrorKind::UnexpectedChar('%'))),
                        }
                    } else {
                        self.pos += 1;
                        (c - b'0') as u32
                    };
                    let bond = pending.take();
                    match open_rings[digit as usize].take() {
                        None => {
                            let kind = bond.map_or(RawBond::Implicit, |b| b.0);
                            open_rings[digit as usize] = Some((p, kind, start));
                        }
                        Some((other, kind, _)) => {
                            if other == p {
                                return Err(self.err(start, SmilesErrorKind::RingSelfBond(digit)));
                            }
                            let here = bond.map_or(RawBond::Implicit, |b| b.0);
                            let kind = match (kind, here) {
                                (RawBond::Implicit, k) | (k, RawBond::Implicit) => k,
                                (a, b) if a == b => a,
                                _ => return Err(self.err(start, SmilesErrorKind::RingBondConflict(digit))),
                            };
                            self.add_bond(other, p, kind, start)?;
                        }
                    }
                }
                _ => {
                    let atom = self.parse_atom()?;
                    let idx = self.atoms.len();
                    self.atoms.push(atom);
                    if let Some(p) = prev {
                        let kind = pending.take().map_or(RawBond::Implicit, |b| b.0);
                        self.add_bond(p, idx, kind, start)?;
                    } else if pending.is_some() {
                        return Err(self.err(start, SmilesErrorKind::BondWithoutAtom));
                    }
                    prev = Some(idx);
                }
            }
        }
        if let Some((_, off)) = pending {
            return Err(self.err(off, SmilesErrorKind::BondWithoutAtom));
        }
        if let Some(&(_, off)) = branch_stack.last() {
            return Err(self.err(off, SmilesErrorKind::UnmatchedParen));
        }
        if let Some((d, Some((_, _, off)))) = open_rings.iter().enumerate().find(|(_, r)| r.is_some()) {
            return Err(self.err(*off, SmilesErrorKind::UnclosedRing(d as u32)));
        }
        if prev.is_none() && !self.atoms.is_empty() {
            return Err(self.err(self.bytes.len(), SmilesErrorKind::UnexpectedEnd));
        }
        Ok(())
    }

    fn parse_atom(&mut self) -> Result<RawAtom, SmilesError> {
        let start = self.pos;
        let c = self.bytes[start];
        if c == b'[' {
            return self.parse_bracket();
        }
        let two = self.bytes.get(start..start + 2);
        let (element, aromatic, len) = match (c, two) {
            (b'C', Some(b"Cl")) => (Element::Cl, false, 2),
            (b'B', Some(b"Br")) => (Element::Br, false, 2),
            (b'C', _) => (Element::C, false, 1),
            (b'N', _) => (Element::N, false, 1),
            (b'O', _) => (Element::O, false, 1),
            (b'F', _) => (Element::F, false, 1),
            (b'S', _) => (Element::S, false, 1),
            (b'P', _) => (Element::P, false, 1),
            (b'c', _) => (Element::C, true, 1),
            (b'n', _) => (Element::N, true, 1),
            (b'o', _) => (Element::O, true, 1),
            (b's', _) => (Element::S, true, 1),
            (b'p', _) => (Element::P, true, 1),
            (b'B' | b'I' | b'b', _) => {
                return Err(self.err(start, SmilesErrorKind::UnsupportedElement(String::from(c as char))))
            }
            _ => return Err(self.err(start, SmilesErrorKind::UnexpectedChar(self.char_at(start)))),
        };
        self.pos += len;
        Ok(RawAtom { element, aromatic, charge: 0, hydrogens: None, attached_h: 0, is_hydrogen: false, offset: start })
    }

    fn char_at(&self, pos: usize) -> char {
        core::str::from_utf8(&self.bytes[pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or(self.bytes[pos] as char)
    }

    fn parse_bracket(&mut self) -> Result<RawAtom, SmilesError> {
        let start = self.pos;
        self.pos += 1;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.err(self.pos, SmilesErrorKind::Unsupported("isotope")));
        }
        let sym_start = self.pos;
        let Some(first) = self.peek() else {
            return Err(self.err(self.pos, SmilesErrorKind::UnexpectedEnd));
        };
        if !first.is_ascii_alphabetic() {
            return Err(self.err(self.pos, SmilesErrorKind::UnexpectedChar(self.char_at(self.pos))));
        }
        self.pos += 1;
        if first.is_ascii_uppercase() && self.peek().is_some_and(|c| c.is_ascii_lowercase()) {
            self.pos += 1;
        }
        let symbol = core::str::from_utf8(&self.bytes[sym_start..self.pos]).unwrap_or("?");
        if symbol == "H" {
            if self.peek() != Some(b']') {
                return Err(self.err(sym_start, SmilesErrorKind::Unsupported("charged or multiple hydrogen atom")));
            }
            self.pos += 1;
            return Ok(RawAtom {
                element: Element::C,
                aromatic: false,
                charge: 0,
                hydrogens: Some(0),
                attached_h: 0,
                is_hydrogen: true,
                offset: start,
            });
        }
        let (element, aromatic) = match symbol {
            "c" | "n" | "o" | "s" | "p" => (Element::from_symbol(&symbol.to_ascii_uppercase()), true),
            _ => (Element::from_symbol(symbol), false),
        };
        let Some(element) = element else {
            return Err(self.err(sym_start, SmilesErrorKind::UnsupportedElement(String::from(symbol))));
        };
        if self.peek() == Some(b'@') {
            return Err(self.err(self.pos, SmilesErrorKind::Unsupported("chirality")));
        }
        let mut hydrogens = 0u8;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            hydrogens = 1;
            if let Some(d) = self.peek().filter(u8::is_ascii_digit) {
                hydrogens = d - b'0';
                self.pos += 1;
            }
        }
        let mut charge: i8 = 0;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let unit: i8 = if sign == b'+' { 1 } else { -1 };
            self.pos += 1;
            charge = unit;
            if let Some(d) = self.peek().filter(u8::is_ascii_digit) {
                charge = unit * (d - b'0') as i8;
                self.pos += 1;
            } else {
                while self.peek() == Some(sign) {
                    charge += unit;
                    self.pos += 1;
                }
            }
        }
        match self.peek() {
            Some(b']') => self.pos += 1,
            Some(b':') => return Err(self.err(self.pos, SmilesErrorKind::Unsupported("atom class"))),
            Some(_) => return Err(self.err(self.pos, SmilesErrorKind::UnexpectedChar(self.char_at(self.pos)))),
            None => return Err(self.err(self.pos, SmilesErrorKind::UnexpectedEnd)),
        }
        Ok(RawAtom {
            element,
            aromatic,
            charge,
            hydrogens: Some(hydrogens),
            attached_h: 0,
            is_hydrogen: false,
            offset: start,
        })
    }

    /// Removes `[H]` atoms, counting each on its single heavy neighbour.
    fn fold_hydrogens(&mut self) -> Result<(), SmilesError> {
        if !self.atoms.iter().any(|a| a.is_hydrogen) {
            return Ok(());
        }
        let mut keep = Vec::with_capacity(self.bonds.len());
        for &(a, b, kind, off) in &self.bonds {
            let (ha, hb) = (self.atoms[a].is_hydrogen, self.atoms[b].is_hydrogen);
            if !ha && !hb {
                keep.push((a, b, kind, off));
                continue;
            }
            if (ha && hb) || !matches!(kind, RawBond::Implicit | RawBond::Single) {
                return Err(self.err(off, SmilesErrorKind::Unsupported("hydrogen atom not singly bonded to a heavy atom")));
            }
            let heavy = if ha { b } else { a };
            self.atoms[heavy].attached_h += 1;
        }
        let mut degree = vec![0usize; self.atoms.len()];
        for &(a, b, _, _) in &self.bonds {
            degree[a] += 1;
            degree[b] += 1;
        }
        if let Some(h) = (0..self.atoms.len()).find(|&i| self.atoms[i].is_hydrogen && degree[i] != 1) {
            return Err(self.err(self.atoms[h].offset, SmilesErrorKind::Unsupported("hydrogen atom not singly bonded to a heavy atom")));
        }
        let mut remap = vec![usize::MAX; self.atoms.len()];
        let mut next = 0;
        for (i, a) in self.atoms.iter().enumerate() {
            if !a.is_hydrogen {
                remap[i] = next;
                next += 1;
            }
        }
        self.atoms.retain(|a| !a.is_hydrogen);
        self.bonds = keep.into_iter().map(|(a, b, k, o)| (remap[a], remap[b], k, o)).collect();
        Ok(())
    }
}

/// Parses a SMILES string into a kekulized graph with implicit hydrogens.
pub fn parse_smiles(text: &str) -> Result<MoleculeGraph, SmilesError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(SmilesError { offset: 0, kind: SmilesErrorKind::Empty });
    }
    let mut p = Parser { bytes: text.as_bytes(), pos: 0, atoms: Vec::new(), bonds: Vec::new() };
    p.parse()?;
    p.fold_hydrogens()?;

    // Topology with placeholder orders, used to find ring bonds.
    let atoms: Vec<Atom> = p.atoms.iter().map(|a| Atom::new(a.element)).collect();
    let placeholder: Vec<Bond> = p
        .bonds
        .iter()
        .map(|&(a, b, _, _)| Bond { a, b, order: BondOrder::Single })
        .collect();
    let topo = MoleculeGraph::from_parts(atoms.clone(), placeholder);
    let is_bridge = bridges(&topo);

    let kinds: Vec<RawBond> = p
        .bonds
        .iter()
        .enumerate()
        .map(|(i, &(a, b, kind, _))| match kind {
            RawBond::Implicit if p.atoms[a].aromatic && p.atoms[b].aromatic && !is_bridge[i] => RawBond::Aromatic,
            RawBond::Implicit => RawBond::Single,
            k => k,
        })
        .collect();

    let orders = kekulize(&p.atoms, &p.bonds, &kinds)?;
    let bonds: Vec<Bond> = p
        .bonds
        .iter()
        .zip(&orders)
        .map(|(&(a, b, _, _), &order)| Bond { a, b, order })
        .collect();
    let mut mol = MoleculeGraph::from_parts(atoms, bonds);
    for (i, raw) in p.atoms.iter().enumerate() {
        let sum = mol.bond_order_sum(i).min(u8::MAX as u16) as u8;
        let atom = mol.atom_mut(i);
        atom.charge = raw.charge;
        atom.hydrogens = raw.attached_h
            + match raw.hydrogens {
                Some(h) => h,
                None => implicit_hydrogens(raw.element, 0, sum.saturating_add(raw.attached_h)),
            };
    }
    if let Some(v) = mol.validate().violations().first() {
        let atom = v.atoms.first().copied().unwrap_or(0);
        let offset = p.atoms.get(atom).map_or(0, |a| a.offset);
        return Err(SmilesError { offset, kind: SmilesErrorKind::Valence(atom) });
    }
    Ok(mol)
}

/// Assigns single/double orders to aromatic bonds so each atom that needs
/// one more bond gets exactly one double bond.
fn kekulize(
    atoms: &[RawAtom],
    bonds: &[(usize, usize, RawBond, usize)],
    kinds: &[RawBond],
) -> Result<Vec<BondOrder>, SmilesError> {
    let n = atoms.len();
    let mut sums = vec![0u16; n];
    for (&(a, b, _, _), kind) in bonds.iter().zip(kinds) {
        let v = match kind {
            RawBond::Double => 2,
            RawBond::Triple => 3,
            _ => 1,
        };
        sums[a] += v;
        sums[b] += v;
    }
    let mut aromatic_nbrs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, (&(a, b, _, _), kind)) in bonds.iter().zip(kinds).enumerate() {
        if *kind == RawBond::Aromatic {
            aromatic_nbrs[a].push((b, i));
            aromatic_nbrs[b].push((a, i));
        }
    }
    let needy: Vec<bool> = (0..n)
        .map(|i| {
            let atom = &atoms[i];
            if !atom.aromatic || aromatic_nbrs[i].is_empty() {
                return false;
            }
            let used = sums[i] + atom.hydrogens.unwrap_or(0) as u16 + atom.attached_h as u16;
            atom.element
                .default_valences(atom.charge)
                .iter()
                .find(|&&v| v as u16 >= used)
                .is_some_and(|&v| v as u16 > used)
        })
        .collect();

    let mut mate: Vec<Option<usize>> = vec![None; n];
    if !match_needy(&needy, &aromatic_nbrs, &mut mate, 0) {
        let offset = (0..n).find(|&i| needy[i]).map_or(0, |i| atoms[i].offset);
        return Err(SmilesError { offset, kind: SmilesErrorKind::Kekulization });
    }
    let mut orders: Vec<BondOrder> = kinds
        .iter()
        .map(|k| match k {
            RawBond::Double => BondOrder::Double,
            RawBond::Triple => BondOrder::Triple,
            _ => BondOrder::Single,
        })
        .collect();
    for bond in mate.iter().flatten() {
        orders[*bond] = BondOrder::Double;
    }
    Ok(orders)
}

/// Backtracking perfect matching over needy atoms; `mate[i]` holds the
/// bond index chosen for atom `i`.
fn match_needy(
    needy: &[bool],
    nbrs: &[Vec<(usize, usize)>],
    mate: &mut [Option<usize>],
    from: usize,
) -> bool {
    let Some(u) = (from..needy.len()).find(|&i| needy[i] && mate[i].is_none()) else {
        return true;
    };
    for &(v, b) in &nbrs[u] {
        if needy[v] && mate[v].is_none() {
            mate[u] = Some(b);
            mate[v] = Some(b);
            if match_needy(needy, nbrs, mate, u + 1) {
                return true;
            }
            mate[u] = None;
            mate[v] = None;
        }
    }
    false
}

/// Canonical SMILES; kekulé form, bracket atoms only where needed.
pub fn write_smiles(mol: &MoleculeGraph) -> String {
    canonical_smiles(mol)
}
