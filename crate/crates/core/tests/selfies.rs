use molga_core::chem::canonical_key;
use molga_core::selfies::{
    decode, decode_symbols, encode, random_selfies, Alphabet, EncodeError, SelfiesError, SelfiesString, SymbolKind,
    DEFAULT_MAX_LEN, DEFAULT_TOKENS,
};
use molga_core::smiles::parse_smiles;
use molga_core::{seeded_rng, MoleculeGraph};
use proptest::prelude::*;

const ORACLE: &str = include_str!("../../molga/data/selfies_oracle.tsv");
const FIXTURE: &str = include_str!("../../molga/data/zinc_fixture.smi");

fn mol(s: &str) -> MoleculeGraph {
    parse_smiles(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn dec(text: &str) -> MoleculeGraph {
    let a = Alphabet::default_21();
    decode(&SelfiesString::parse(text, &a, DEFAULT_MAX_LEN).unwrap(), &a)
}

fn key(m: &MoleculeGraph) -> String {
    canonical_key(m).into_string()
}

#[test]
fn default_alphabet_has_21_unique_tokens() {
    let a = Alphabet::default_21();
    assert_eq!(a.len(), 21);
    let tokens: Vec<&str> = a.symbols().iter().map(|s| s.token.as_str()).collect();
    assert_eq!(tokens, DEFAULT_TOKENS);
    let mut sorted = tokens.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), 21);
    assert!(a.symbols().iter().all(|s| s.digit < 16));
    assert!(matches!(a.symbol(a.index_of("[Branch2_1]").unwrap()).kind, SymbolKind::Branch { digits: 2, bond: 1 }));
}

#[test]
fn decoder_examples() {
    assert_eq!(key(&dec("[C][C]")), key(&mol("CC")));
    assert_eq!(key(&dec("[C][=O]")), key(&mol("C=O")));
    assert_eq!(key(&dec("[F][F][F]")), key(&mol("FF")));
    assert_eq!(key(&dec("")), key(&MoleculeGraph::methane()));
}

#[test]
fn decoder_matches_reference_implementation() {
    let mut n = 0;
    for line in ORACLE.lines().filter(|l| !l.starts_with('#')) {
        let (selfies, smiles) = line.split_once('\t').unwrap();
        assert_eq!(key(&dec(selfies)), key(&mol(smiles)), "{selfies}");
        n += 1;
    }
    assert_eq!(n, 2000);
}

#[test]
fn unknown_tokens_are_rejected_at_construction() {
    let a = Alphabet::default_21();
    assert!(matches!(SelfiesString::parse("[C][B]", &a, 81), Err(SelfiesError::Alphabet(_))));
    assert!(matches!(SelfiesString::new(vec![21], &a, 81), Err(_)));
    assert!(matches!(SelfiesString::parse(&"[C]".repeat(82), &a, 81), Err(SelfiesError::TooLong { len: 82, max: 81 })));
}

#[test]
fn encoder_examples() {
    let a = Alphabet::default_21();
    assert_eq!(encode(&MoleculeGraph::methane(), &a).unwrap().to_text(&a), "[C]");
    let benzene = mol("c1ccccc1");
    let s = encode(&benzene, &a).unwrap();
    let text = s.to_text(&a);
    assert_eq!(text.matches("[C]").count() + text.matches("[=C]").count(), 6);
    assert_eq!(text.matches("[Ring").count(), 1, "{text}");
    assert_eq!(key(&decode(&s, &a)), key(&benzene));
    let no_chlorine = Alphabet::from_tokens(DEFAULT_TOKENS.iter().copied().filter(|t| *t != "[Cl]")).unwrap();
    let err = encode(&mol("CCCl"), &no_chlorine).unwrap_err();
    assert!(matches!(err, EncodeError::UnsupportedElement { atom: 2, .. }), "{err}");
    assert!(matches!(encode(&mol("C[N+](C)(C)C"), &a), Err(EncodeError::Charged { atom: 1, charge: 1 })));
    assert!(matches!(encode(&dec("[S][=S][Ring1][C]"), &a), Err(EncodeError::Inexpressible { .. })));
}

#[test]
fn fixture_round_trips_through_selfies() {
    let a = Alphabet::default_21();
    for line in FIXTURE.lines() {
        let m = mol(line.split_whitespace().next().unwrap());
        let s = encode(&m, &a).unwrap_or_else(|e| panic!("{line}: {e}"));
        assert!(s.len() <= 200);
        assert_eq!(key(&decode(&s, &a)), key(&m), "{line}");
    }
}

#[test]
fn random_strings_are_reproducible() {
    let a = Alphabet::default_21();
    assert!(random_selfies(0, &a, &mut seeded_rng(1), 81).unwrap().is_empty());
    assert_eq!(decode(&SelfiesString::empty(), &a).atom_count(), 1);
    let x = random_selfies(81, &a, &mut seeded_rng(42), 81).unwrap();
    let y = random_selfies(81, &a, &mut seeded_rng(42), 81).unwrap();
    assert_eq!(x, y);
    assert!(matches!(random_selfies(82, &a, &mut seeded_rng(42), 81), Err(SelfiesError::TooLong { .. })));
}

#[test]
fn fifty_thousand_samples_decode_to_valid_molecules() {
    let a = Alphabet::default_21();
    let mut rng = seeded_rng(7);
    for _ in 0..50_000 {
        let s = random_selfies(81, &a, &mut rng, 81).unwrap();
        assert!(decode(&s, &a).validate().is_valid(), "{}", s.to_text(&a));
    }
}

#[test]
fn extended_alphabet_decodes_validly() {
    let a = Alphabet::extended();
    assert!(a.len() > 21);
    let mut rng = seeded_rng(3);
    for _ in 0..5_000 {
        let s = random_selfies(81, &a, &mut rng, 81).unwrap();
        assert!(decode(&s, &a).validate().is_valid());
    }
}

fn symbols(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..21, 0..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn every_string_decodes_to_a_valid_molecule(s in symbols(81)) {
        let a = Alphabet::default_21();
        prop_assert!(decode_symbols(&s, &a).validate().is_valid());
    }

    #[test]
    fn prefixes_never_have_more_atoms(s in symbols(81), cut in 0usize..=81) {
        let a = Alphabet::default_21();
        let cut = cut.min(s.len());
        prop_assert!(decode_symbols(&s[..cut], &a).atom_count() <= decode_symbols(&s, &a).atom_count());
    }

    #[test]
    fn decoding_is_pure(s in symbols(81)) {
        let a = Alphabet::default_21();
        prop_assert_eq!(decode_symbols(&s, &a), decode_symbols(&s, &a));
    }

    #[test]
    fn decoded_molecules_round_trip_through_the_encoder(s in symbols(40)) {
        let a = Alphabet::default_21();
        let m = decode_symbols(&s, &a);
        match encode(&m, &a) {
            Ok(e) => prop_assert_eq!(key(&decode(&e, &a)), key(&m)),
            // Ring symbols can raise a bond to an order no atom symbol
            // carries, e.g. S#S from [S][=S][Ring1][C].
            Err(e) => prop_assert!(matches!(e, EncodeError::Inexpressible { .. }), "{}", e),
        }
    }
}
