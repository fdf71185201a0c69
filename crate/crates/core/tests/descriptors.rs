use std::collections::BTreeMap;
use std::sync::OnceLock;

use molga_core::chem::Perceived;
use molga_core::descriptors::{
    crippen_logp, penalized_logp, ring_penalty, sa_score, sa_terms, BuiltinDescriptors, FitnessRecord, FragmentTable,
    MeanStd, NormalizationError, NormalizationParams, PrecomputedDescriptors, RawDescriptors,
};
use molga_core::selfies::{decode_symbols, Alphabet};
use molga_core::smiles::parse_smiles;
use molga_core::MoleculeGraph;
use proptest::prelude::*;

const ORACLE: &str = include_str!("../../molga/data/descriptor_oracle.tsv");
const FRAGMENTS: &str = include_str!("../../molga/data/fragments.tsv");
const FIXTURE: &str = include_str!("../../molga/data/zinc_fixture.smi");

fn mol(s: &str) -> MoleculeGraph {
    parse_smiles(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn table() -> FragmentTable {
    static TABLE: OnceLock<FragmentTable> = OnceLock::new();
    TABLE.get_or_init(load_table).clone()
}

fn load_table() -> FragmentTable {
    let counts: BTreeMap<u32, u64> = FRAGMENTS
        .lines()
        .skip(3)
        .map(|l| {
            let (id, n) = l.split_once('\t').unwrap();
            (id.parse().unwrap(), n.parse().unwrap())
        })
        .collect();
    FragmentTable::from_counts(counts).unwrap()
}

struct OracleRow {
    smiles: String,
    logp: f64,
    sa: f64,
    sa_same_table: f64,
}

fn oracle() -> Vec<OracleRow> {
    ORACLE
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            OracleRow {
                smiles: f[0].into(),
                logp: f[1].parse().unwrap(),
                sa: f[2].parse().unwrap(),
                sa_same_table: f[3].parse().unwrap(),
            }
        })
        .collect()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            r[k] = (i + j) as f64 / 2.0;
        }
        i = j + 1;
    }
    r
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn crippen_reference_values() {
    assert!((crippen_logp(&MoleculeGraph::methane()) - 0.6361).abs() < 1e-4);
    assert!((crippen_logp(&mol("c1ccccc1")) - 1.6866).abs() < 1e-4);
}

#[test]
fn crippen_matches_reference_toolkit_on_oracle_set() {
    let rows = oracle();
    assert_eq!(rows.len(), 100);
    let within = rows.iter().filter(|r| (crippen_logp(&mol(&r.smiles)) - r.logp).abs() <= 0.5).count();
    assert!(within >= 90, "{within}/100 within 0.5");
    for r in &rows {
        let ours = crippen_logp(&mol(&r.smiles));
        assert!((ours - r.logp).abs() < 1e-3, "{}: {ours} vs {}", r.smiles, r.logp);
    }
}

#[test]
fn sa_matches_the_reference_formula_with_the_same_table() {
    let t = table();
    for r in oracle() {
        let ours = sa_score(&mol(&r.smiles), &t);
        assert!((ours - r.sa_same_table).abs() < 2e-3, "{}: {ours} vs {}", r.smiles, r.sa_same_table);
    }
}

#[test]
fn sa_ranks_like_the_reference_toolkit() {
    let t = table();
    let rows = oracle();
    let ours: Vec<f64> = rows.iter().map(|r| sa_score(&mol(&r.smiles), &t)).collect();
    let theirs: Vec<f64> = rows.iter().map(|r| r.sa).collect();
    let rho = pearson(&ranks(&ours), &ranks(&theirs));
    assert!(rho >= 0.8, "spearman {rho}");
}

#[test]
fn sa_examples() {
    let t = table();
    // Reference formula evaluated with the same fragment table.
    let ethane = sa_score(&mol("CC"), &t);
    assert!((ethane - 3.3087063804878527).abs() < 1e-9, "{ethane}");
    assert!((sa_score(&mol("CCCC"), &t) - 2.088230738775673).abs() < 1e-9);
    assert_eq!(sa_score(&mol("c1ccccc1"), &t), 1.0);
    let chain = sa_score(&mol(&"S".repeat(60)), &t);
    assert!((chain - 7.371403251336891).abs() < 1e-9, "{chain}");
    assert!(chain >= ethane);
    let macro_ring = sa_terms(&Perceived::new(&mol("C1CCCCCCCCC1")), &t);
    assert_eq!(macro_ring.macrocycles, 1);
    let spiro = sa_terms(&Perceived::new(&mol("C1CCC2(CC1)CCCC2")), &t);
    assert_eq!(spiro.spiro, 1);
    let bridged = sa_terms(&Perceived::new(&mol("C1CC2CCC1C2")), &t);
    assert_eq!(bridged.bridgeheads, 2);
}

#[test]
fn ring_penalty_examples() {
    assert_eq!(ring_penalty(&mol("c1ccccc1")), 0.0);
    assert_eq!(ring_penalty(&mol("C1CCCCCCC1")), 2.0);
    assert_eq!(ring_penalty(&mol("CCCCCCCCCC")), 0.0);
}

#[test]
fn j_is_a_z_score_combination() {
    let p = NormalizationParams::default();
    let at_mean = RawDescriptors { logp: 2.47, sa: 3.05, ring_penalty: 0.038 };
    assert!(FitnessRecord::from_raw(at_mean, &p).j.abs() < 1e-12);
    let plus_one = RawDescriptors { logp: 3.89, ..at_mean };
    assert!((FitnessRecord::from_raw(plus_one, &p).j - 1.0).abs() < 1e-12);
    let r = FitnessRecord::from_raw(plus_one, &p).with_discriminator(0.5, 1000.0);
    assert!((r.total - (r.j + 500.0)).abs() < 1e-9);
}

#[test]
fn normalization_rejects_degenerate_spreads() {
    let ok = MeanStd { mean: 0.0, std: 1.0 };
    let bad = MeanStd { mean: 0.0, std: 0.0 };
    assert!(matches!(NormalizationParams::new(ok, bad, ok), Err(NormalizationError::NonPositiveStd("SA"))));
    assert!(NormalizationParams::from_samples(&[]).is_err());
}

#[test]
fn fixture_statistics_near_reference_constants() {
    let t = table();
    let provider = BuiltinDescriptors::new(t);
    let p = NormalizationParams::default();
    let records: Vec<FitnessRecord> = FIXTURE
        .lines()
        .map(|l| penalized_logp(&mol(l.split_whitespace().next().unwrap()), &p, &provider).unwrap())
        .collect();
    let mean_logp = records.iter().map(|r| r.raw.logp).sum::<f64>() / records.len() as f64;
    assert!((mean_logp - 2.47).abs() <= 0.15, "{mean_logp}");
    // Best of dataset equals a brute-force scan.
    let best = records.iter().map(|r| r.j).fold(f64::NEG_INFINITY, f64::max);
    let mut scan = f64::NEG_INFINITY;
    for r in &records {
        let j = (r.raw.logp - 2.47) / 1.42 - (r.raw.sa - 3.05) / 0.831 - (r.raw.ring_penalty - 0.038) / 0.224;
        scan = scan.max(j);
    }
    assert!((best - scan).abs() < 1e-9);
}

#[test]
fn precomputed_provider_looks_up_by_key() {
    let mut table = PrecomputedDescriptors::new();
    table.insert(&mol("CCO"), 1.0, 2.0);
    let p = NormalizationParams::default();
    let r = penalized_logp(&mol("OCC"), &p, &table).unwrap();
    assert_eq!((r.raw.logp, r.raw.sa), (1.0, 2.0));
    assert!(penalized_logp(&mol("CCC"), &p, &table).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn sa_and_ring_penalty_stay_in_range(s in prop::collection::vec(0u8..21, 0..81)) {
        let m = decode_symbols(&s, &Alphabet::default_21());
        let t = table();
        let sa = sa_score(&m, &t);
        prop_assert!((1.0..=10.0).contains(&sa));
        prop_assert!(ring_penalty(&m) >= 0.0);
    }

    #[test]
    fn j_is_linear_in_each_component(
        logp in -10.0f64..10.0, sa in 1.0f64..10.0, ring in 0.0f64..20.0, dl in -3.0f64..3.0,
    ) {
        let p = NormalizationParams::default();
        let base = FitnessRecord::from_raw(RawDescriptors { logp, sa, ring_penalty: ring }, &p);
        prop_assert!((base.j - (base.logp_z - base.sa_z - base.ring_z)).abs() < 1e-12);
        let moved = FitnessRecord::from_raw(RawDescriptors { logp: logp + dl, sa, ring_penalty: ring }, &p);
        prop_assert!((moved.j - base.j - dl / 1.42).abs() < 1e-9);
        let moved = FitnessRecord::from_raw(RawDescriptors { logp, sa: sa + dl, ring_penalty: ring }, &p);
        prop_assert!((moved.j - base.j + dl / 0.831).abs() < 1e-9);
    }
}
