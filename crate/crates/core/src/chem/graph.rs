use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::element::{implicit_hydrogens, Element};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BondOrder {
    Single = 1,
    Double = 2,
    Triple = 3,
}

impl BondOrder {
    pub fn from_u8(order: u8) -> Option<BondOrder> {
        match order {
            1 => Some(BondOrder::Single),
            2 => Some(BondOrder::Double),
            3 => Some(BondOrder::Triple),
            _ => None,
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    /// Implicit hydrogen count.
    pub hydrogens: u8,
}

impl Atom {
    pub fn new(element: Element) -> Self {
        Atom { element, charge: 0, hydrogens: 0 }
    }

    pub fn with_hydrogens(element: Element, charge: i8, hydrogens: u8) -> Self {
        Atom { element, charge, hydrogens }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

impl Bond {
    /// The endpoint of this bond that is not `atom`.
    #[inline]
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphError {
    AtomOutOfRange(usize),
    SelfBond(usize),
    DuplicateBond(usize, usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::AtomOutOfRange(i) => write!(f, "atom index {i} out of range"),
            GraphError::SelfBond(i) => write!(f, "atom {i} cannot bond to itself"),
            GraphError::DuplicateBond(a, b) => write!(f, "atoms {a} and {b} are already bonded"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GraphError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    AtomOutOfRange,
    SelfBond,
    DuplicateBond,
    /// Bond orders plus hydrogens exceed the element's maximum valence.
    Valence { used: u16, max: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub atoms: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(Vec<Violation>),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Validity::Valid => &[],
            Validity::Invalid(v) => v,
        }
    }
}

/// Heavy-atom molecular graph with implicit hydrogens.
///
/// Aromatic systems are stored kekulized; aromaticity is a perceived
/// property (see [`super::Aromaticity`]), never a bond type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoleculeGraph {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    /// Per atom: (neighbor, bond index).
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl MoleculeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn methane() -> Self {
        let mut mol = Self::new();
        mol.add_atom(Atom::with_hydrogens(Element::C, 0, 4));
        mol
    }

    /// Builds a graph without checking any invariant; use [`validate`]
    /// afterwards. Out-of-range bond endpoints are kept out of the
    /// adjacency index but still reported by [`validate`].
    ///
    /// [`validate`]: MoleculeGraph::validate
    pub fn from_parts(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Self {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, bond) in bonds.iter().enumerate() {
            if bond.a < atoms.len() && bond.b < atoms.len() {
                adjacency[bond.a].push((bond.b, i));
                if bond.a != bond.b {
                    adjacency[bond.b].push((bond.a, i));
                }
            }
        }
        MoleculeGraph { atoms, bonds, adjacency }
    }

    pub fn add_atom(&mut self, atom: Atom) -> usize {
        self.atoms.push(atom);
        self.adjacency.push(Vec::new());
        self.atoms.len() - 1
    }

    pub fn add_bond(&mut self, a: usize, b: usize, order: BondOrder) -> Result<usize, GraphError> {
        let n = self.atoms.len();
        if a >= n {
            return Err(GraphError::AtomOutOfRange(a));
        }
        if b >= n {
            return Err(GraphError::AtomOutOfRange(b));
        }
        if a == b {
            return Err(GraphError::SelfBond(a));
        }
        if self.bond_between(a, b).is_some() {
            return Err(GraphError::DuplicateBond(a, b));
        }
        self.bonds.push(Bond { a, b, order });
        let idx = self.bonds.len() - 1;
        self.adjacency[a].push((b, idx));
        self.adjacency[b].push((a, idx));
        Ok(idx)
    }

    pub fn set_bond_order(&mut self, bond: usize, order: BondOrder) {
        self.bonds[bond].order = order;
    }

    pub fn atom_mut(&mut self, i: usize) -> &mut Atom {
        &mut self.atoms[i]
    }

    #[inline]
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    #[inline]
    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    #[inline]
    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    #[inline]
    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }

    #[inline]
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    #[inline]
    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Every stored atom is a heavy atom.
    #[inline]
    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// (neighbor, bond index) pairs of atom `i`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency
            .get(a)?
            .iter()
            .find(|&&(nbr, _)| nbr == b)
            .map(|&(_, bond)| bond)
    }

    pub fn bond_order_sum(&self, i: usize) -> u16 {
        self.adjacency[i]
            .iter()
            .map(|&(_, b)| self.bonds[b].order.value() as u16)
            .sum()
    }

    /// Degree plus hydrogens.
    pub fn total_degree(&self, i: usize) -> usize {
        self.degree(i) + self.atoms[i].hydrogens as usize
    }

    pub fn total_hydrogens(&self) -> usize {
        self.atoms.iter().map(|a| a.hydrogens as usize).sum()
    }

    /// Resets every atom's hydrogen count from its bonds and the element's
    /// standard valences.
    pub fn saturate_hydrogens(&mut self) {
        for i in 0..self.atoms.len() {
            let sum = self.bond_order_sum(i).min(u8::MAX as u16) as u8;
            let atom = &mut self.atoms[i];
            atom.hydrogens = implicit_hydrogens(atom.element, atom.charge, sum);
        }
    }

    pub fn validate(&self) -> Validity {
        let n = self.atoms.len();
        let mut violations = Vec::new();
        let mut seen: Vec<(usize, usize)> = Vec::with_capacity(self.bonds.len());
        for bond in &self.bonds {
            if bond.a >= n || bond.b >= n {
                violations.push(Violation {
                    kind: ViolationKind::AtomOutOfRange,
                    atoms: vec![bond.a, bond.b],
                });
                continue;
            }
            if bond.a == bond.b {
                violations.push(Violation { kind: ViolationKind::SelfBond, atoms: vec![bond.a] });
                continue;
            }
            let key = (bond.a.min(bond.b), bond.a.max(bond.b));
            if seen.contains(&key) {
                violations.push(Violation {
                    kind: ViolationKind::DuplicateBond,
                    atoms: vec![key.0, key.1],
                });
            } else {
                seen.push(key);
            }
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            let used = self.bond_order_sum(i) + atom.hydrogens as u16;
            let max = atom.element.max_valence_charged(atom.charge);
            if used > max as u16 {
                violations.push(Violation {
                    kind: ViolationKind::Valence { used, max },
                    atoms: vec![i],
                });
            }
        }
        if violations.is_empty() {
            Validity::Valid
        } else {
            Validity::Invalid(violations)
        }
    }

    /// Connected components as sorted atom lists, ordered by smallest atom.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = vec![start];
            label[start] = id;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &(v, _) in &self.adjacency[u] {
                    if label[v] == usize::MAX {
                        label[v] = id;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Relabels atoms so that old atom `i` becomes `perm[i]`. Bonds keep
    /// their relative order.
    pub fn permuted(&self, perm: &[usize]) -> MoleculeGraph {
        assert_eq!(perm.len(), self.atoms.len());
        let mut atoms = self.atoms.clone();
        for (old, &new) in perm.iter().enumerate() {
            atoms[new] = self.atoms[old];
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond { a: perm[b.a], b: perm[b.b], order: b.order })
            .collect();
        MoleculeGraph::from_parts(atoms, bonds)
    }
}
