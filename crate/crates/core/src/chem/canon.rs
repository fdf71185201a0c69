use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use super::element::implicit_hydrogens;
use super::graph::{BondOrder, MoleculeGraph};
use super::rings::bridges;

/// Isomorphism-invariant identifier: the canonical SMILES of the graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// 64-bit FNV-1a digest of the key, rendered as 16 hex digits.
    pub fn hex_digest(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.0.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        let mut out = String::with_capacity(16);
        let _ = write!(out, "{h:016x}");
        out
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_key(mol: &MoleculeGraph) -> CanonicalKey {
    CanonicalKey(canonical_smiles(mol))
}

pub fn canonical_smiles(mol: &MoleculeGraph) -> String {
    Canonicalizer::new(mol).run().text
}

/// Canonical position of every atom (0-based, dense).
pub fn canonical_ranks(mol: &MoleculeGraph) -> Vec<usize> {
    let leaf = Canonicalizer::new(mol).run();
    let mut ranks = vec![0; mol.atom_count()];
    for (pos, &atom) in leaf.order.iter().enumerate() {
        ranks[atom] = pos;
    }
    ranks
}

/// Dense class ids refined until stable (1-dimensional Weisfeiler-Leman
/// with bond orders as edge colours).
fn refine(mol: &MoleculeGraph, classes: &mut [usize]) {
    let n = classes.len();
    let mut count = distinct(classes);
    let mut keys: Vec<(usize, Vec<(u8, usize)>, usize)> = Vec::with_capacity(n);
    loop {
        if count == n {
            return;
        }
        keys.clear();
        for i in 0..n {
            let mut nb: Vec<(u8, usize)> = mol
                .neighbors(i)
                .iter()
                .map(|&(j, b)| (mol.bond(b).order.value(), classes[j]))
                .collect();
            nb.sort_unstable();
            keys.push((classes[i], nb, i));
        }
        keys.sort_unstable();
        let mut next = 0;
        for k in 0..n {
            if k > 0 && (keys[k].0 != keys[k - 1].0 || keys[k].1 != keys[k - 1].1) {
                next += 1;
            }
            classes[keys[k].2] = next;
        }
        let new_count = next + 1;
        if new_count == count {
            return;
        }
        count = new_count;
    }
}

fn distinct(classes: &[usize]) -> usize {
    let mut seen: Vec<usize> = classes.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn initial_classes(mol: &MoleculeGraph) -> Vec<usize> {
    let is_bridge = bridges(mol);
    let n = mol.atom_count();
    let mut keys: Vec<([i32; 6], usize)> = (0..n)
        .map(|i| {
            let atom = mol.atom(i);
            let in_ring = mol.neighbors(i).iter().any(|&(_, b)| !is_bridge[b]);
            (
                [
                    mol.degree(i) as i32,
                    atom.element.atomic_number() as i32,
                    atom.hydrogens as i32,
                    atom.charge as i32,
                    mol.bond_order_sum(i) as i32,
                    in_ring as i32,
                ],
                i,
            )
        })
        .collect();
    keys.sort_unstable();
    let mut classes = vec![0; n];
    let mut next = 0;
    for k in 0..n {
        if k > 0 && keys[k].0 != keys[k - 1].0 {
            next += 1;
        }
        classes[keys[k].1] = next;
    }
    classes
}

struct Leaf {
    text: String,
    order: Vec<usize>,
}

/// Individualization-refinement search for the smallest serialization,
/// pruned with automorphisms found along the way.
struct Canonicalizer<'a> {
    mol: &'a MoleculeGraph,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

impl<'a> Canonicalizer<'a> {
    fn new(mol: &'a MoleculeGraph) -> Self {
        Canonicalizer { mol, best: None, automorphisms: Vec::new() }
    }

    fn run(mut self) -> Leaf {
        if self.mol.atom_count() == 0 {
            return Leaf { text: String::new(), order: Vec::new() };
        }
        let mut classes = initial_classes(self.mol);
        refine(self.mol, &mut classes);
        let mut path = Vec::new();
        self.search(classes, &mut path);
        self.best.expect("search visits at least one leaf")
    }

    fn search(&mut self, classes: Vec<usize>, path: &mut Vec<usize>) {
        let n = classes.len();
        // Smallest class id shared by several atoms
        let mut size = vec![0usize; n];
        for &c in &classes {
            size[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| size[c] > 1) else {
            self.visit_leaf(&classes);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&i| classes[i] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &choice in &cell {
            if self.equivalent_to_explored(choice, &explored, path) {
                continue;
            }
            let mut next: Vec<usize> = classes
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let bump = (c > target || (c == target && i != choice)) as usize;
                    c + bump
                })
                .collect();
            refine(self.mol, &mut next);
            path.push(choice);
            self.search(next, path);
            path.pop();
            explored.push(choice);
        }
    }

    fn equivalent_to_explored(&self, choice: usize, explored: &[usize], path: &[usize]) -> bool {
        if explored.is_empty() {
            return false;
        }
        let n = self.mol.atom_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for gamma in &self.automorphisms {
            if path.iter().any(|&p| gamma[p] != p) {
                continue;
            }
            for i in 0..n {
                let (a, b) = (find(&mut parent, i), find(&mut parent, gamma[i]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, choice);
        explored.iter().any(|&e| find(&mut parent, e) == root)
    }

    fn visit_leaf(&mut self, classes: &[usize]) {
        let leaf = serialize(self.mol, classes);
        match &self.best {
            None => self.best = Some(leaf),
            Some(best) => match leaf.text.cmp(&best.text) {
                core::cmp::Ordering::Less => self.best = Some(leaf),
                core::cmp::Ordering::Equal => {
                    let mut gamma = vec![0; leaf.order.len()];
                    for (a, b) in leaf.order.iter().zip(&best.order) {
                        gamma[*a] = *b;
                    }
                    self.automorphisms.push(gamma);
                }
                core::cmp::Ordering::Greater => {}
            },
        }
    }
}

fn bond_symbol(order: BondOrder) -> &'static str {
    match order {
        BondOrder::Single => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
    }
}

/// Writes one atom, bare when the organic-subset rules reproduce its
/// hydrogen count.
pub(crate) fn write_atom(out: &mut String, mol: &MoleculeGraph, i: usize) {
    let atom = mol.atom(i);
    let sum = mol.bond_order_sum(i).min(u8::MAX as u16) as u8;
    let bare = atom.charge == 0 && atom.hydrogens == implicit_hydrogens(atom.element, 0, sum);
    if bare {
        out.push_str(atom.element.symbol());
        return;
    }
    out.push('[');
    out.push_str(atom.element.symbol());
    match atom.hydrogens {
        0 => {}
        1 => out.push('H'),
        h => {
            let _ = write!(out, "H{h}");
        }
    }
    match atom.charge {
        0 => {}
        1 => out.push('+'),
        -1 => out.push('-'),
        c if c > 0 => {
            let _ = write!(out, "+{c}");
        }
        c => {
            let _ = write!(out, "-{}", -c);
        }
    }
    out.push(']');
}

fn write_ring_digit(out: &mut String, d: usize) {
    if d < 10 {
        out.push((b'0' + d as u8) as char);
    } else {
        let _ = write!(out, "%{d:02}");
    }
}

/// Depth-first serialization with neighbors visited in ascending rank.
fn serialize(mol: &MoleculeGraph, ranks: &[usize]) -> Leaf {
    let n = mol.atom_count();
    let mut by_rank: Vec<usize> = (0..n).collect();
    by_rank.sort_unstable_by_key(|&i| ranks[i]);

    // Pass 1: spanning forest, child order and ring-closure bonds.
    let mut visited = vec![false; n];
    let mut bond_used = vec![false; mol.bond_count()];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    // Per atom: ring bonds in the order they are written at that atom.
    let mut ring_bonds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for &start in &by_rank {
        if visited[start] {
            continue;
        }
        roots.push(start);
        visited[start] = true;
        let mut stack: Vec<(usize, Vec<(usize, usize)>, usize)> = Vec::new();
        stack.push((start, sorted_neighbors(mol, ranks, start), 0));
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
            if visited[v] {
                // Back edge: v is an ancestor still on the stack.
                ring_bonds[v].push(b);
                ring_bonds[u].push(b);
            } else {
                visited[v] = true;
                children[u].push((v, b));
                stack.push((v, sorted_neighbors(mol, ranks, v), 0));
            }
        }
    }

    // Pass 2: emit text.
    let mut text = String::new();
    let mut order = Vec::with_capacity(n);
    let mut digit_of_bond = vec![usize::MAX; mol.bond_count()];
    let mut digit_busy: Vec<bool> = Vec::new();
    enum Task {
        Atom(usize, usize),
        Text(&'static str),
    }
    for (ci, &root) in roots.iter().enumerate() {
        if ci > 0 {
            text.push('.');
        }
        let mut tasks = vec![Task::Atom(root, usize::MAX)];
        while let Some(task) = tasks.pop() {
            let (u, via) = match task {
                Task::Text(s) => {
                    text.push_str(s);
                    continue;
                }
                Task::Atom(u, via) => (u, via),
            };
            if via != usize::MAX {
                text.push_str(bond_symbol(mol.bond(via).order));
            }
            write_atom(&mut text, mol, u);
            order.push(u);
            // Closings first, then openings, each in discovery order.
            for &b in &ring_bonds[u] {
                if digit_of_bond[b] != usize::MAX {
                    let d = digit_of_bond[b];
                    write_ring_digit(&mut text, d);
                    digit_busy[d] = false;
                }
            }
            for &b in &ring_bonds[u] {
                if digit_of_bond[b] == usize::MAX {
                    let d = match digit_busy.iter().skip(1).position(|&busy| !busy) {
                        Some(p) => p + 1,
                        None => {
                            if digit_busy.is_empty() {
                                digit_busy.push(true);
                            }
                            digit_busy.push(false);
                            digit_busy.len() - 1
                        }
                    };
                    digit_busy[d] = true;
                    digit_of_bond[b] = d;
                    text.push_str(bond_symbol(mol.bond(b).order));
                    write_ring_digit(&mut text, d);
                }
            }
            let kids = &children[u];
            if let Some((&(last, lb), branches)) = kids.split_last() {
                tasks.push(Task::Atom(last, lb));
                for &(c, cb) in branches.iter().rev() {
                    tasks.push(Task::Text(")"));
                    tasks.push(Task::Atom(c, cb));
                    tasks.push(Task::Text("("));
                }
            }
        }
    }
    Leaf { text, order }
}

fn sorted_neighbors(mol: &MoleculeGraph, ranks: &[usize], u: usize) -> Vec<(usize, usize)> {
    let mut nbrs = mol.neighbors(u).to_vec();
    nbrs.sort_unstable_by_key(|&(v, _)| ranks[v]);
    nbrs
}
