use molga_core::chem::{canonical_key, max_ring_size, RingInfo, ViolationKind};
use molga_core::smiles::parse_smiles;
use molga_core::{Atom, Bond, BondOrder, Element, MoleculeGraph};
use proptest::prelude::*;

const FIXTURE: &str = include_str!("../../molga/data/zinc_fixture.smi");

fn mol(s: &str) -> MoleculeGraph {
    parse_smiles(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn fixture() -> Vec<MoleculeGraph> {
    FIXTURE.lines().filter(|l| !l.trim().is_empty()).map(|l| mol(l.split_whitespace().next().unwrap())).collect()
}

#[test]
fn methane_is_valid() {
    let m = MoleculeGraph::methane();
    assert_eq!(m.atom(0).hydrogens, 4);
    assert!(m.validate().is_valid());
    assert_eq!(m.heavy_atom_count(), 1);
}

#[test]
fn overbonded_carbon_reports_atom_zero() {
    let mut atoms = vec![Atom::new(Element::C)];
    let mut bonds = Vec::new();
    for i in 1..=3 {
        atoms.push(Atom::with_hydrogens(Element::C, 0, 2));
        bonds.push(Bond { a: 0, b: i, order: BondOrder::Double });
    }
    let m = MoleculeGraph::from_parts(atoms, bonds);
    let v = m.validate();
    assert!(!v.is_valid());
    assert_eq!(v.violations().len(), 1);
    assert_eq!(v.violations()[0].atoms, vec![0]);
    assert_eq!(v.violations()[0].kind, ViolationKind::Valence { used: 6, max: 4 });
}

#[test]
fn ethene_uses_all_four_valences() {
    let m = mol("C=C");
    for i in 0..2 {
        assert_eq!(m.bond_order_sum(i) + m.atom(i).hydrogens as u16, 4);
    }
    assert!(m.validate().is_valid());
}

#[test]
fn self_and_duplicate_bonds_are_violations() {
    let atoms = vec![Atom::new(Element::C), Atom::new(Element::C)];
    let looped = MoleculeGraph::from_parts(atoms.clone(), vec![Bond { a: 0, b: 0, order: BondOrder::Single }]);
    assert_eq!(looped.validate().violations()[0].kind, ViolationKind::SelfBond);
    let doubled = MoleculeGraph::from_parts(
        atoms,
        vec![Bond { a: 0, b: 1, order: BondOrder::Single }, Bond { a: 1, b: 0, order: BondOrder::Single }],
    );
    assert!(doubled.validate().violations().iter().any(|v| v.kind == ViolationKind::DuplicateBond));
}

#[test]
fn ring_sizes_of_small_molecules() {
    assert_eq!(max_ring_size(&mol("CC")), 0);
    assert_eq!(max_ring_size(&mol("c1ccccc1")), 6);
    assert_eq!(max_ring_size(&mol("C1CCC2CCCCC2C1")), 6);
    assert_eq!(max_ring_size(&mol("C1CCCCCCC1")), 8);
    // Naphthalene's ten-ring envelope is not in the basis.
    assert_eq!(max_ring_size(&mol("c1ccc2ccccc2c1")), 6);
    assert_eq!(RingInfo::perceive(&mol("C12CC1C2")).rings.len(), 2);
}

#[test]
fn heavy_atoms_of_benzene() {
    assert_eq!(mol("c1ccccc1").heavy_atom_count(), 6);
}

#[test]
fn butane_isomers_have_distinct_keys() {
    assert_eq!(canonical_key(&mol("CCCC")), canonical_key(&mol("C(C)CC")));
    assert_ne!(canonical_key(&mol("CCCC")), canonical_key(&mol("CC(C)C")));
}

#[test]
fn keys_of_all_four_carbon_skeletons_are_distinct() {
    // Every connected simple graph on four carbons with single bonds;
    // isomorphism classes found by checking all 24 relabellings.
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let perms = permutations(4);
    let mut classes: Vec<(Vec<(usize, usize)>, String)> = Vec::new();
    for mask in 1u32..64 {
        let edges: Vec<(usize, usize)> = (0..6).filter(|i| mask & (1 << i) != 0).map(|i| pairs[i]).collect();
        let g = carbon_graph(4, &edges);
        if g.components().len() != 1 {
            continue;
        }
        let key = canonical_key(&g).into_string();
        let iso = classes.iter().find(|(e, _)| perms.iter().any(|p| same_edges(e, &edges, p)));
        match iso {
            Some((_, k)) => assert_eq!(k, &key),
            None => {
                assert!(classes.iter().all(|(_, k)| k != &key));
                classes.push((edges, key));
            }
        }
    }
    assert_eq!(classes.len(), 6);
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..n {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

fn same_edges(a: &[(usize, usize)], b: &[(usize, usize)], p: &[usize]) -> bool {
    let norm = |(x, y): (usize, usize)| (x.min(y), x.max(y));
    let mut mapped: Vec<_> = a.iter().map(|&(x, y)| norm((p[x], p[y]))).collect();
    let mut other: Vec<_> = b.iter().map(|&e| norm(e)).collect();
    mapped.sort_unstable();
    other.sort_unstable();
    mapped == other
}

fn carbon_graph(n: usize, edges: &[(usize, usize)]) -> MoleculeGraph {
    let mut g = MoleculeGraph::new();
    for _ in 0..n {
        g.add_atom(Atom::new(Element::C));
    }
    for &(a, b) in edges {
        g.add_bond(a, b, BondOrder::Single).unwrap();
    }
    g.saturate_hydrogens();
    g
}

#[test]
fn write_parse_preserves_fixture_keys() {
    for m in fixture() {
        let text = molga_core::smiles::write_smiles(&m);
        assert_eq!(canonical_key(&mol(&text)), canonical_key(&m), "{text}");
    }
}

/// Brute-force minimum cycle basis: enumerate the whole cycle space from
/// a fundamental basis, keep the elements that are simple cycles, and pick
/// greedily by length.
fn brute_force_max_ring(n: usize, edges: &[(usize, usize)]) -> usize {
    let m = edges.len();
    // Spanning forest by union-find.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut tree = vec![false; m];
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            tree[i] = true;
        }
    }
    let fundamental: Vec<u64> = (0..m)
        .filter(|&i| !tree[i])
        .map(|i| {
            let path = tree_path(n, edges, &tree, edges[i].0, edges[i].1);
            path.iter().fold(1u64 << i, |acc, &e| acc ^ (1u64 << e))
        })
        .collect();
    let rank = fundamental.len();
    let mut cycles: Vec<u64> = (1u64..(1 << rank))
        .map(|mask| (0..rank).filter(|j| mask & (1 << j) != 0).fold(0, |acc, j| acc ^ fundamental[j]))
        .filter(|&c| is_simple_cycle(n, edges, c))
        .collect();
    cycles.sort_by_key(|c| c.count_ones());
    let mut basis: Vec<u64> = Vec::new();
    let mut largest = 0;
    for c in cycles {
        if basis.len() == rank {
            break;
        }
        if independent(&basis, c) {
            basis.push(c);
            largest = largest.max(c.count_ones() as usize);
        }
    }
    largest
}

fn tree_path(n: usize, edges: &[(usize, usize)], tree: &[bool], from: usize, to: usize) -> Vec<usize> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        for (i, &(a, b)) in edges.iter().enumerate() {
            if !tree[i] || (a != u && b != u) {
                continue;
            }
            let v = if a == u { b } else { a };
            if !seen[v] {
                seen[v] = true;
                prev[v] = Some((u, i));
                queue.push_back(v);
            }
        }
    }
    let mut path = Vec::new();
    let mut at = to;
    while let Some((p, e)) = prev[at] {
        path.push(e);
        at = p;
    }
    path
}

fn is_simple_cycle(n: usize, edges: &[(usize, usize)], set: u64) -> bool {
    let mut degree = vec![0; n];
    let chosen: Vec<usize> = (0..edges.len()).filter(|&i| set & (1 << i) != 0).collect();
    for &i in &chosen {
        degree[edges[i].0] += 1;
        degree[edges[i].1] += 1;
    }
    if degree.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    // Connected: walk from one vertex along chosen edges.
    let start = edges[chosen[0]].0;
    let mut seen = vec![start];
    let mut changed = true;
    while changed {
        changed = false;
        for &i in &chosen {
            let (a, b) = edges[i];
            if seen.contains(&a) != seen.contains(&b) {
                seen.push(if seen.contains(&a) { b } else { a });
                changed = true;
            }
        }
    }
    seen.len() == degree.iter().filter(|&&d| d == 2).count()
}

fn independent(basis: &[u64], c: u64) -> bool {
    // Gaussian elimination over GF(2).
    let mut rows: Vec<u64> = basis.to_vec();
    rows.push(c);
    let mut rank = 0;
    for bit in 0..64 {
        if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & (1 << bit) != 0) {
            rows.swap(rank, pivot);
            for r in 0..rows.len() {
                if r != rank && rows[r] & (1 << bit) != 0 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank == rows.len()
}

/// Random connected carbon skeletons of up to 12 atoms with at most four
/// neighbours each and a handful of extra ring-closing edges.
fn skeleton() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (3usize..=12)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
            (Just(n), parents, prop::collection::vec((0..n, 0..n), 0..8))
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            let degree = |edges: &[(usize, usize)], v: usize| edges.iter().filter(|&&(a, b)| a == v || b == v).count();
            for (a, b) in extra {
                let dup = edges.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
                if a != b && !dup && degree(&edges, a) < 4 && degree(&edges, b) < 4 {
                    edges.push((a, b));
                }
            }
            (n, edges)
        })
        .prop_filter("valence", |(n, edges)| {
            (0..*n).all(|v| edges.iter().filter(|&&(a, b)| a == v || b == v).count() <= 4)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn max_ring_size_matches_cycle_space_oracle((n, edges) in skeleton()) {
        let g = carbon_graph(n, &edges);
        prop_assert!(g.validate().is_valid());
        prop_assert_eq!(max_ring_size(&g), brute_force_max_ring(n, &edges));
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_key_ignores_atom_order(
        (index, perm) in (0usize..1000).prop_flat_map(|i| {
            let n = FIXTURE.lines().nth(i).map(|l| mol(l.split_whitespace().next().unwrap()).atom_count()).unwrap();
            (Just(i), permutation(n))
        })
    ) {
        let line = FIXTURE.lines().nth(index).unwrap();
        let m = mol(line.split_whitespace().next().unwrap());
        prop_assert_eq!(canonical_key(&m.permuted(&perm)), canonical_key(&m));
    }

    #[test]
    fn canonical_key_ignores_skeleton_order((n, edges) in skeleton(), seed in any::<u64>()) {
        let g = carbon_graph(n, &edges);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = molga_core::seeded_rng(seed);
        molga_core::discriminator::shuffle(&mut perm, &mut rng);
        prop_assert_eq!(canonical_key(&g.permuted(&perm)), canonical_key(&g));
    }
}
