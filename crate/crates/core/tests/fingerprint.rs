use std::collections::BTreeSet;

use molga_core::chem::canonical_key;
use molga_core::discriminator::featurize;
use molga_core::fingerprint::{
    fraction_unique, internal_diversity, mean_pairwise_similarity, morgan_fp, tanimoto, Fingerprint,
    FingerprintError, DEFAULT_RADIUS, DEFAULT_WIDTH,
};
use molga_core::selfies::{decode_symbols, Alphabet};
use molga_core::smiles::parse_smiles;
use molga_core::MoleculeGraph;
use proptest::prelude::*;

const FIXTURE: &str = include_str!("../../molga/data/zinc_fixture.smi");

fn fp(s: &str) -> Fingerprint {
    morgan_fp(&parse_smiles(s).unwrap(), DEFAULT_RADIUS, DEFAULT_WIDTH).unwrap()
}

fn bits(b: &[usize]) -> Fingerprint {
    Fingerprint::from_bits(b.iter().copied(), 16, 2).unwrap()
}

/// Tanimoto from bit sets, independent of the word-level code.
fn set_tanimoto(a: &Fingerprint, b: &Fingerprint) -> f64 {
    let x: BTreeSet<usize> = a.ones().collect();
    let y: BTreeSet<usize> = b.ones().collect();
    let union = x.union(&y).count();
    if union == 0 {
        1.0
    } else {
        x.intersection(&y).count() as f64 / union as f64
    }
}

fn brute_diversity(set: &[Fingerprint], diagonal: bool) -> f64 {
    let n = set.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += 1.0 - set_tanimoto(&set[i], &set[j]);
            }
        }
    }
    let pairs = if diagonal { n * n } else { n * (n - 1) };
    if pairs == 0 {
        0.0
    } else {
        sum / pairs as f64
    }
}

#[test]
fn methane_sets_one_bit() {
    let f = morgan_fp(&MoleculeGraph::methane(), 2, 2048).unwrap();
    assert_eq!(f.count_ones(), 1);
    assert_eq!(featurize(&MoleculeGraph::methane()).nonzero_count(), 1);
}

#[test]
fn isomers_and_isomorphs() {
    assert_eq!(fp("CCCC"), fp("C(CC)C"));
    assert_ne!(fp("CCCC"), fp("CC(C)C"));
    assert_eq!(featurize(&parse_smiles("OCC").unwrap()), featurize(&parse_smiles("CCO").unwrap()));
}

#[test]
fn features_count_fingerprint_bits() {
    for line in FIXTURE.lines().take(50) {
        let m = parse_smiles(line).unwrap();
        let f = morgan_fp(&m, 2, 2048).unwrap();
        assert_eq!(featurize(&m).nonzero_count(), f.count_ones() as usize);
    }
}

#[test]
fn width_checks() {
    assert_eq!(morgan_fp(&MoleculeGraph::methane(), 2, 0), Err(FingerprintError::ZeroWidth));
    let a = Fingerprint::zeros(16, 2).unwrap();
    let b = Fingerprint::zeros(32, 2).unwrap();
    assert_eq!(tanimoto(&a, &b), Err(FingerprintError::WidthMismatch { left: 16, right: 32 }));
    assert!(internal_diversity(&[], true).is_err());
    assert!(fraction_unique(&[]).is_err());
}

#[test]
fn tanimoto_examples() {
    let x = fp("c1ccccc1O");
    assert_eq!(tanimoto(&x, &x).unwrap(), 1.0);
    assert_eq!(tanimoto(&bits(&[0, 1]), &bits(&[2, 3])).unwrap(), 0.0);
    assert_eq!(tanimoto(&bits(&[1, 2, 3]), &bits(&[2, 3, 4])).unwrap(), 0.5);
    assert_eq!(tanimoto(&bits(&[]), &bits(&[])).unwrap(), 1.0);
}

#[test]
fn diversity_examples() {
    let x = bits(&[1, 2]);
    let y = bits(&[3, 4]);
    assert_eq!(internal_diversity(&vec![x.clone(); 10], true).unwrap(), 0.0);
    assert_eq!(internal_diversity(&[x.clone(), y.clone()], true).unwrap(), 0.5);
    assert_eq!(internal_diversity(&[x, y], false).unwrap(), 1.0);
}

#[test]
fn mean_pairwise_similarity_matches_brute_force() {
    let set: Vec<Fingerprint> = FIXTURE.lines().take(5).map(fp).collect();
    let mut sum = 0.0;
    for i in 0..5 {
        for j in i + 1..5 {
            sum += set_tanimoto(&set[i], &set[j]);
        }
    }
    assert!((mean_pairwise_similarity(&set).unwrap() - sum / 10.0).abs() < 1e-15);
    assert_eq!(mean_pairwise_similarity(&vec![set[0].clone(); 5]).unwrap(), 1.0);
}

#[test]
fn fraction_unique_examples() {
    let methane = canonical_key(&MoleculeGraph::methane());
    assert_eq!(fraction_unique(&vec![methane.clone(); 500]).unwrap(), 1.0 / 500.0);
    let distinct: Vec<_> = FIXTURE.lines().take(500).map(|l| canonical_key(&parse_smiles(l).unwrap())).collect();
    assert_eq!(fraction_unique(&distinct).unwrap(), 1.0);
    let mixed: Vec<_> = (0..500).map(|i| distinct[i % 200].clone()).collect();
    assert_eq!(fraction_unique(&mixed).unwrap(), 0.4);
}

#[test]
fn diversity_equals_double_loop_on_random_dataset_samples() {
    let all: Vec<Fingerprint> = FIXTURE.lines().map(fp).collect();
    let mut rng = molga_core::seeded_rng(11);
    for _ in 0..50 {
        let mut idx: Vec<usize> = (0..all.len()).collect();
        molga_core::discriminator::shuffle(&mut idx, &mut rng);
        let set: Vec<Fingerprint> = idx[..100].iter().map(|&i| all[i].clone()).collect();
        for diagonal in [true, false] {
            assert_eq!(internal_diversity(&set, diagonal).unwrap(), brute_diversity(&set, diagonal));
        }
    }
}

fn random_fp() -> impl Strategy<Value = Fingerprint> {
    prop::collection::btree_set(0usize..64, 0..24).prop_map(|b| Fingerprint::from_bits(b, 64, 2).unwrap())
}

fn molecule() -> impl Strategy<Value = MoleculeGraph> {
    prop::collection::vec(0u8..21, 0..60).prop_map(|s| decode_symbols(&s, &Alphabet::default_21()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tanimoto_is_a_symmetric_similarity(a in random_fp(), b in random_fp()) {
        let ab = tanimoto(&a, &b).unwrap();
        prop_assert_eq!(ab, tanimoto(&b, &a).unwrap());
        prop_assert_eq!(ab, set_tanimoto(&a, &b));
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(tanimoto(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn jaccard_distance_obeys_the_triangle_inequality(a in random_fp(), b in random_fp(), c in random_fp()) {
        let d = |x: &Fingerprint, y: &Fingerprint| 1.0 - tanimoto(x, y).unwrap();
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }

    #[test]
    fn diversity_ignores_set_order(set in prop::collection::vec(random_fp(), 1..12), seed in any::<u64>()) {
        let mut shuffled = set.clone();
        molga_core::discriminator::shuffle(&mut shuffled, &mut molga_core::seeded_rng(seed));
        let a = internal_diversity(&set, true).unwrap();
        let b = internal_diversity(&shuffled, true).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert_eq!(a, brute_diversity(&set, true));
    }

    #[test]
    fn uniform_duplication_keeps_diversity(set in prop::collection::vec(random_fp(), 1..=6), k in 2usize..4) {
        let repeated: Vec<Fingerprint> =
            set.iter().flat_map(|f| std::iter::repeat(f.clone()).take(k)).collect();
        let d = brute_diversity(&set, true);
        prop_assert!((brute_diversity(&repeated, true) - d).abs() < 1e-12);
        prop_assert!((internal_diversity(&repeated, true).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn isomorphic_molecules_share_fingerprints(m in molecule(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..m.atom_count()).collect();
        molga_core::discriminator::shuffle(&mut perm, &mut molga_core::seeded_rng(seed));
        let p = m.permuted(&perm);
        prop_assert_eq!(morgan_fp(&m, 2, 2048).unwrap(), morgan_fp(&p, 2, 2048).unwrap());
    }
}
