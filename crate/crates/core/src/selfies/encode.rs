use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;

use super::{decode_symbols, Alphabet, SelfiesString, SymbolKind};
use crate::chem::{canonical_key, canonical_ranks, implicit_hydrogens, Element, MoleculeGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncodeError {
    Empty,
    Disconnected,
    /// No atom symbol of this element exists in the alphabet.
    UnsupportedElement { atom: usize, element: Element },
    Charged { atom: usize, charge: i8 },
    /// The hydrogen count differs from the implicit count the decoder
    /// would assign.
    Hydrogens { atom: usize, found: u8, implied: u8 },
    Valence { atom: usize },
    /// Every traversal tried needed a symbol or length digit the
    /// alphabet lacks; `atom` is where the last attempt failed.
    Inexpressible { atom: usize },
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::Empty => write!(f, "cannot encode an empty molecule"),
            EncodeError::Disconnected => write!(f, "cannot encode a disconnected molecule"),
            EncodeError::UnsupportedElement { atom, element } => {
                write!(f, "atom {atom}: element {element} has no symbol in the alphabet")
            }
            EncodeError::Charged { atom, charge } => write!(f, "atom {atom}: charge {charge} is not expressible"),
            EncodeError::Hydrogens { atom, found, implied } => {
                write!(f, "atom {atom}: {found} hydrogens, decoding would imply {implied}")
            }
            EncodeError::Valence { atom } => write!(f, "atom {atom}: valence exceeded"),
            EncodeError::Inexpressible { atom } => {
                write!(f, "atom {atom}: bond or ring length not expressible with this alphabet")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EncodeError {}

const VARIANTS_PER_START: u64 = 4;
const MAX_STARTS: usize = 24;

/// Encodes a connected molecule; the result decodes to an isomorphic graph.
pub fn encode(mol: &MoleculeGraph, alphabet: &Alphabet) -> Result<SelfiesString, EncodeError> {
    let n = mol.atom_count();
    if n == 0 {
        return Err(EncodeError::Empty);
    }
    if mol.components().len() > 1 {
        return Err(EncodeError::Disconnected);
    }
    let table = Table::new(alphabet);
    for (i, atom) in mol.atoms().iter().enumerate() {
        if atom.charge != 0 {
            return Err(EncodeError::Charged { atom: i, charge: atom.charge });
        }
        let sum = mol.bond_order_sum(i);
        if sum > atom.element.max_valence() as u16 {
            return Err(EncodeError::Valence { atom: i });
        }
        let implied = implicit_hydrogens(atom.element, 0, sum as u8);
        if atom.hydrogens != implied {
            return Err(EncodeError::Hydrogens { atom: i, found: atom.hydrogens, implied });
        }
        if !table.atom.iter().any(|&(e, _, _)| e == atom.element) {
            return Err(EncodeError::UnsupportedElement { atom: i, element: atom.element });
        }
    }

    let ranks = canonical_ranks(mol);
    let key = canonical_key(mol);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&i| (mol.degree(i) != 1, ranks[i]));
    let mut last_fail = 0;
    let mut best: Option<Vec<u8>> = None;
    for &start in starts.iter().take(MAX_STARTS) {
        for variant in 0..VARIANTS_PER_START {
            match attempt(mol, &table, &ranks, start, variant) {
                Ok(symbols) => {
                    if best.as_ref().is_some_and(|b| b.len() <= symbols.len()) {
                        continue;
                    }
                    if canonical_key(&decode_symbols(&symbols, alphabet)) == key {
                        best = Some(symbols);
                    }
                }
                Err(atom) => last_fail = atom,
            }
        }
    }
    // Shortest verified string; the earliest attempt wins ties.
    best.map(|symbols| SelfiesString { symbols }).ok_or(EncodeError::Inexpressible { atom: last_fail })
}

/// Symbol lookups needed by the encoder.
struct Table {
    /// (element, bond, index)
    atom: Vec<(Element, u8, u8)>,
    /// (digit count, bond, index)
    branch: Vec<(u8, u8, u8)>,
    ring: Vec<(u8, u8, u8)>,
    /// A token for each digit value, if any.
    digit: [Option<u8>; 16],
}

impl Table {
    fn new(alphabet: &Alphabet) -> Self {
        let mut t = Table { atom: Vec::new(), branch: Vec::new(), ring: Vec::new(), digit: [None; 16] };
        for (i, s) in alphabet.symbols().iter().enumerate() {
            let i = i as u8;
            match s.kind {
                SymbolKind::Atom { element, bond } => t.atom.push((element, bond, i)),
                SymbolKind::Branch { digits, bond } => t.branch.push((digits, bond, i)),
                SymbolKind::Ring { digits, bond } => t.ring.push((digits, bond, i)),
            }
            let slot = &mut t.digit[s.digit as usize];
            if slot.is_none() {
                *slot = Some(i);
            }
        }
        t.branch.sort_unstable();
        t.ring.sort_unstable();
        t
    }

    fn atom_token(&self, element: Element, bond: Option<u8>) -> Option<u8> {
        match bond {
            Some(b) => self.atom.iter().find(|&&(e, o, _)| e == element && o == b).map(|t| t.2),
            // First atom: its bond is ignored, prefer the plain token.
            None => self
                .atom
                .iter()
                .filter(|&&(e, _, _)| e == element)
                .min_by_key(|&&(_, o, _)| o)
                .map(|t| t.2),
        }
    }

    /// Digit tokens spelling `n` with exactly `count` digits.
    fn digits(&self, n: usize, count: u8) -> Option<Vec<u8>> {
        if count < 4 && n >= 16usize.pow(count as u32) {
            return None;
        }
        let mut out = vec![0; count as usize];
        let mut rest = n;
        for slot in out.iter_mut().rev() {
            *slot = self.digit[rest % 16]?;
            rest /= 16;
        }
        Some(out)
    }

    /// Symbols that derive nothing when appended to a scope whose state
    /// is `state`.
    fn padding(&self, k: usize, state: i32) -> Option<Vec<u8>> {
        if k == 0 {
            return Some(Vec::new());
        }
        if state < 0 {
            return Some(vec![0; k]);
        }
        let any_branch = self.branch.first()?.2;
        if state <= 1 {
            return Some(vec![any_branch; k]);
        }
        // A single-bond branch whose body is ignored, lowering state by one.
        for &(digits, bond, idx) in &self.branch {
            if bond != 1 {
                continue;
            }
            for body in 1..=k {
                let len = 1 + digits as usize + body;
                if len > k {
                    break;
                }
                let Some(d) = self.digits(body - 1, digits) else { continue };
                if let Some(rest) = self.padding(k - len, state - 1) {
                    let mut out = vec![idx];
                    out.extend(d);
                    out.extend(core::iter::repeat(any_branch).take(body));
                    out.extend(rest);
                    return Some(out);
                }
            }
        }
        None
    }
}

struct Plan {
    children: Vec<Vec<usize>>,
    /// Non-tree bonds, stored at their later (descendant) atom.
    closures: Vec<Vec<(usize, u8)>>,
    position: Vec<usize>,
    /// Order of the bond to the parent.
    in_order: Vec<u8>,
}

fn plan(mol: &MoleculeGraph, ranks: &[usize], start: usize, variant: u64) -> Plan {
    let n = mol.atom_count();
    let mut rng = crate::seeded_rng(variant.wrapping_mul(0x9e37_79b9).wrapping_add(start as u64));
    let mut children = vec![Vec::new(); n];
    let mut closures = vec![Vec::new(); n];
    let mut in_order = vec![0u8; n];
    let mut visited = vec![false; n];
    let mut bond_used = vec![false; mol.bond_count()];
    let order_nbrs = |u: usize, rng: &mut crate::Rng| {
        let mut nbrs = mol.neighbors(u).to_vec();
        nbrs.sort_unstable_by_key(|&(v, _)| ranks[v]);
        if variant > 0 {
            nbrs.shuffle(rng);
        }
        nbrs
    };
    visited[start] = true;
    let first = order_nbrs(start, &mut rng);
    let mut stack = vec![(start, first, 0usize)];
    while let Some((u, nbrs, slot)) = stack.last_mut() {
        let u = *u;
        if *slot == nbrs.len() {
            stack.pop();
            continue;
        }
        let (v, b) = nbrs[*slot];
        *slot += 1;
        if bond_used[b] {
            continue;
        }
        bond_used[b] = true;
        let order = mol.bond(b).order.value();
        if visited[v] {
            closures[u].push((v, order));
        } else {
            visited[v] = true;
            in_order[v] = order;
            children[u].push(v);
            let next = order_nbrs(v, &mut rng);
            stack.push((v, next, 0));
        }
    }

    // Subtree sizes decide the main chain for the default variant.
    let mut size = vec![1usize; n];
    let mut post = Vec::with_capacity(n);
    let mut walk = vec![(start, false)];
    while let Some((u, done)) = walk.pop() {
        if done {
            post.push(u);
            continue;
        }
        walk.push((u, true));
        for &c in &children[u] {
            walk.push((c, false));
        }
    }
    for &u in &post {
        for &c in &children[u] {
            size[u] += size[c];
        }
    }
    for kids in children.iter_mut() {
        if variant % 2 == 0 {
            if let Some(main) = (0..kids.len()).max_by_key(|&i| (size[kids[i]], usize::MAX - ranks[kids[i]])) {
                let m = kids.remove(main);
                kids.push(m);
            }
        } else {
            kids.shuffle(&mut rng);
        }
    }

    let mut position = vec![0; n];
    let mut next = 0;
    let mut walk = vec![start];
    while let Some(u) = walk.pop() {
        position[u] = next;
        next += 1;
        for &c in children[u].iter().rev() {
            walk.push(c);
        }
    }
    Plan { children, closures, position, in_order }
}

/// One traversal; `Err` carries the atom where a needed symbol is missing.
fn attempt(mol: &MoleculeGraph, table: &Table, ranks: &[usize], start: usize, variant: u64) -> Result<Vec<u8>, usize> {
    let plan = plan(mol, ranks, start, variant);
    emit(mol, table, &plan, start, true).map(|(symbols, _)| symbols)
}

/// Symbols for the subtree at `u`, plus the derivation state after its
/// final main-chain atom.
fn emit(mol: &MoleculeGraph, table: &Table, plan: &Plan, u: usize, first: bool) -> Result<(Vec<u8>, i32), usize> {
    let element = mol.atom(u).element;
    let max = element.max_valence() as i32;
    let mut out = Vec::new();
    let token = if first {
        table.atom_token(element, None)
    } else {
        table.atom_token(element, Some(plan.in_order[u]))
    };
    out.push(token.ok_or(u)?);
    let state = if first { max } else { max - plan.in_order[u] as i32 };
    let end_state = if state == 0 { -1 } else { state };

    for &(left, order) in &plan.closures[u] {
        let gap = plan.position[u] - plan.position[left] - 1;
        let mut remaining = order;
        while remaining > 0 {
            let mut placed = false;
            for &(digits, bond, idx) in &table.ring {
                if bond > remaining {
                    continue;
                }
                if let Some(d) = table.digits(gap, digits) {
                    out.push(idx);
                    out.extend(d);
                    remaining -= bond;
                    placed = true;
                    break;
                }
            }
            if !placed {
                return Err(u);
            }
        }
    }

    let kids = &plan.children[u];
    let Some((&main, branches)) = kids.split_last() else {
        return Ok((out, end_state));
    };
    for &c in branches {
        let (body, body_state) = emit(mol, table, plan, c, false)?;
        let x = plan.in_order[c];
        let mut done = false;
        'pad: for extra in 0..48 {
            let n = body.len() + extra - 1;
            for &(digits, bond, idx) in &table.branch {
                if bond != x {
                    continue;
                }
                let Some(d) = table.digits(n, digits) else { continue };
                let Some(pad) = table.padding(extra, body_state) else { continue };
                out.push(idx);
                out.extend(d);
                out.extend_from_slice(&body);
                out.extend(pad);
                done = true;
                break 'pad;
            }
        }
        if !done {
            return Err(c);
        }
    }
    let (tail, tail_state) = emit(mol, table, plan, main, false)?;
    out.extend(tail);
    Ok((out, tail_state))
}
