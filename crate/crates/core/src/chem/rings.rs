use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::graph::MoleculeGraph;

/// A cycle of the minimum cycle basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    /// Sorted atom indices.
    pub atoms: Vec<usize>,
    /// Sorted bond indices.
    pub bonds: Vec<usize>,
}

impl Ring {
    #[inline]
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains_atom(&self, atom: usize) -> bool {
        self.atoms.binary_search(&atom).is_ok()
    }

    pub fn contains_bond(&self, bond: usize) -> bool {
        self.bonds.binary_search(&bond).is_ok()
    }
}

/// Ring perception results for one molecule.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingInfo {
    /// Minimum cycle basis ordered by (size, atom list).
    pub rings: Vec<Ring>,
    pub atom_in_ring: Vec<bool>,
    pub bond_in_ring: Vec<bool>,
}

impl RingInfo {
    pub fn perceive(mol: &MoleculeGraph) -> Self {
        let bridge = bridges(mol);
        let bond_in_ring: Vec<bool> = bridge.iter().map(|&b| !b).collect();
        let mut atom_in_ring = vec![false; mol.atom_count()];
        for (i, bond) in mol.bonds().iter().enumerate() {
            if bond_in_ring[i] {
                atom_in_ring[bond.a] = true;
                atom_in_ring[bond.b] = true;
            }
        }
        let rings = minimum_cycle_basis(mol, &bond_in_ring);
        RingInfo { rings, atom_in_ring, bond_in_ring }
    }

    pub fn max_ring_size(&self) -> usize {
        self.rings.iter().map(Ring::len).max().unwrap_or(0)
    }

    /// Number of basis rings containing `atom`.
    pub fn atom_ring_count(&self, atom: usize) -> usize {
        self.rings.iter().filter(|r| r.contains_atom(atom)).count()
    }

    pub fn bond_ring_count(&self, bond: usize) -> usize {
        self.rings.iter().filter(|r| r.contains_bond(bond)).count()
    }
}

/// Size of the largest ring of the minimum cycle basis; 0 when acyclic.
pub fn max_ring_size(mol: &MoleculeGraph) -> usize {
    RingInfo::perceive(mol).max_ring_size()
}

/// Marks every bond whose removal disconnects its component.
pub fn bridges(mol: &MoleculeGraph) -> Vec<bool> {
    let n = mol.atom_count();
    let mut is_bridge = vec![false; mol.bond_count()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    // Iterative DFS: (atom, bond used to enter, next neighbor slot).
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (u, via, ref mut slot)) = stack.last_mut() {
            if let Some(&(v, bond)) = mol.neighbors(u).get(*slot) {
                *slot += 1;
                if bond == via {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, bond, 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] > disc[parent] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    is_bridge
}

struct BitRow(Vec<u64>);

impl BitRow {
    fn new(bits: usize) -> Self {
        BitRow(vec![0; bits.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn lowest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Incremental GF(2) elimination over bond-incidence vectors.
pub(crate) struct CycleSpace {
    pivots: Vec<(usize, BitRow)>,
    width: usize,
}

impl CycleSpace {
    pub(crate) fn new(width: usize) -> Self {
        CycleSpace { pivots: Vec::new(), width }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds the cycle if it is independent of those already accepted.
    pub(crate) fn insert(&mut self, bonds: &[usize]) -> bool {
        let mut row = BitRow::new(self.width);
        for &b in bonds {
            row.set(b);
        }
        for (pivot, basis) in &self.pivots {
            if row.get(*pivot) {
                row.xor(basis);
            }
        }
        match row.lowest() {
            Some(p) => {
                for (_, basis) in self.pivots.iter_mut() {
                    if basis.get(p) {
                        basis.xor(&row);
                    }
                }
                self.pivots.push((p, row));
                true
            }
            None => false,
        }
    }
}

pub(crate) fn cycle_rank(mol: &MoleculeGraph) -> usize {
    let components = mol.components().len();
    (mol.bond_count() + components).saturating_sub(mol.atom_count())
}

/// Shortest-path tree from `root` restricted to ring bonds. Neighbors are
/// expanded in ascending index order, so ties resolve lexicographically.
fn bfs_tree(mol: &MoleculeGraph, root: usize, in_ring: &[bool]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = mol.atom_count();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut parent_bond = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    dist[root] = 0;
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        let mut nbrs: Vec<(usize, usize)> =
            mol.neighbors(u).iter().copied().filter(|&(_, b)| in_ring[b]).collect();
        nbrs.sort_unstable();
        for (v, b) in nbrs {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = u;
                parent_bond[v] = b;
                queue.push_back(v);
            }
        }
    }
    (dist, parent, parent_bond)
}

fn path_to_root(v: usize, parent: &[usize], parent_bond: &[usize], atoms: &mut Vec<usize>, bonds: &mut Vec<usize>) {
    let mut cur = v;
    atoms.push(cur);
    while parent[cur] != usize::MAX {
        bonds.push(parent_bond[cur]);
        cur = parent[cur];
        atoms.push(cur);
    }
}

fn minimum_cycle_basis(mol: &MoleculeGraph, in_ring: &[bool]) -> Vec<Ring> {
    let target = cycle_rank(mol);
    if target == 0 {
        return Vec::new();
    }
    let mut candidates: Vec<Ring> = Vec::new();
    for root in 0..mol.atom_count() {
        if !mol.neighbors(root).iter().any(|&(_, b)| in_ring[b]) {
            continue;
        }
        let (dist, parent, parent_bond) = bfs_tree(mol, root, in_ring);
        for (bi, bond) in mol.bonds().iter().enumerate() {
            if !in_ring[bi] {
                continue;
            }
            let (x, y) = (bond.a, bond.b);
            if dist[x] == usize::MAX || dist[y] == usize::MAX {
                continue;
            }
            if parent_bond[x] == bi || parent_bond[y] == bi {
                continue;
            }
            let mut atoms = Vec::new();
            let mut bonds = vec![bi];
            path_to_root(x, &parent, &parent_bond, &mut atoms, &mut bonds);
            let split = atoms.len();
            path_to_root(y, &parent, &parent_bond, &mut atoms, &mut bonds);
            // Both paths end at root; they must share nothing else.
            atoms.pop();
            let (px, py) = atoms.split_at(split);
            if px.iter().filter(|a| py.contains(a)).count() > 0 {
                continue;
            }
            atoms.sort_unstable();
            bonds.sort_unstable();
            if atoms.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            candidates.push(Ring { atoms, bonds });
        }
    }
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.atoms.cmp(&b.atoms)).then_with(|| a.bonds.cmp(&b.bonds)));
    candidates.dedup();

    let mut space = CycleSpace::new(mol.bond_count());
    let mut basis = Vec::with_capacity(target);
    for ring in candidates {
        if space.insert(&ring.bonds) {
            basis.push(ring);
            if space.rank() == target {
                break;
            }
        }
    }
    basis
}
