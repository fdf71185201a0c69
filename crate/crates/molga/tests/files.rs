use std::collections::BTreeMap;

use molga::alphabet_file::{parse_alphabet, write_alphabet};
use molga::config::{Kind, Overrides, RunConfig};
use molga::dataset::{load_dataset, parse_dataset, BUNDLED_FIXTURE};
use molga::fragments::{load_table, parse_table, write_counts, TableData, BUNDLED_TABLE};
use molga::report::cmd_report;
use molga::Error;
use molga_core::descriptors::{sa_score, FragmentTable};
use molga_core::smiles::parse_smiles;
use molga_core::Alphabet;

#[test]
fn two_line_dataset() {
    let d = parse_dataset("CCO ethanol\nc1ccccc1\n", "inline").unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(d.entries[0].smiles, "CCO");
    assert_eq!(d.entries[1].line, 2);
    assert!(d.skips.is_empty());
}

#[test]
fn one_malformed_line_in_a_hundred_is_skipped_and_logged() {
    let mut text: String = BUNDLED_FIXTURE.lines().take(99).map(|l| format!("{l}\n")).collect();
    text.insert_str(0, "C1CC(\n");
    let d = parse_dataset(&text, "inline").unwrap();
    assert_eq!(d.len(), 99);
    assert_eq!(d.skips.len(), 1);
    assert_eq!(d.skips[0].line, 1);
    assert!(d.skip_log().starts_with("line\ttext\treason\n1\tC1CC(\t"));
}

#[test]
fn too_many_bad_lines_fail_the_whole_file() {
    let mut text: String = BUNDLED_FIXTURE.lines().take(80).map(|l| format!("{l}\n")).collect();
    for _ in 0..20 {
        text.push_str("[Si]\n");
    }
    assert!(matches!(parse_dataset(&text, "inline"), Err(Error::Dataset(_))));
    assert!(matches!(parse_dataset("# only a comment\n\n", "inline"), Err(Error::Dataset(_))));
    assert!(matches!(load_dataset("/nonexistent/file.smi"), Err(Error::Io { .. })));
}

#[test]
fn bundled_fixture_loads_completely() {
    let d = load_dataset("bundled").unwrap();
    assert_eq!(d.len(), 1000);
    assert!(d.skips.is_empty());
}

#[test]
fn config_files_and_flags_combine() {
    let mut c = RunConfig::from_toml("[ga]\npop_size = 50\nseed = 4\n[beta]\nbeta = -100.0\n").unwrap();
    assert_eq!(c.ga.pop_size, 50);
    c.apply(&Overrides { seed: Some(9), generations: Some(3), ..Overrides::default() });
    let r = c.resolve(Kind::Evolve).unwrap();
    assert_eq!((r.ga.seed, r.ga.pop_size, r.ga.generations), (9, 50, Some(3)));
    assert_eq!(r.beta.beta, Some(-100.0));
    assert_eq!(r.discriminator.disc.as_deref(), Some("mlp"));
    // The resolved file restores the exact same configuration.
    assert_eq!(RunConfig::from_toml(&r.to_toml()).unwrap(), r);
    assert!(r.clone().resolve(Kind::Baseline).is_err());
}

#[test]
fn invalid_configs_are_reported() {
    assert!(RunConfig::from_toml("[ga]\npopsize = 5\n").is_err());
    let bad = |toml: &str| RunConfig::from_toml(toml).unwrap().resolve(Kind::Evolve).is_err();
    assert!(bad("[beta]\nschedule = \"sometimes\"\n"));
    assert!(bad("[ga]\npop_size = 1\n"));
    assert!(bad("[ga]\nrepeats = 0\n"));
    assert!(bad("[normalization]\nsa_std = 0.0\n"));
    assert!(bad("[beta]\nbeta = 5.0\n[discriminator]\ndisc = \"none\"\n"));
}

#[test]
fn adaptive_schedules_get_their_defaults() {
    let t = RunConfig::from_toml("[beta]\nschedule = \"time\"\n").unwrap().resolve(Kind::Evolve).unwrap();
    assert_eq!((t.beta.beta, t.beta.start_generation, t.beta.patience), (Some(1000.0), Some(100), 5));
    let s = RunConfig::from_toml("[beta]\nschedule = \"sim\"\n").unwrap().resolve(Kind::Evolve).unwrap();
    assert_eq!((s.beta.start_generation, s.beta.window), (Some(20), 5));
    let c = RunConfig::default().resolve(Kind::Constrained).unwrap();
    assert_eq!((c.ga.generations, c.constrained.targets, c.constrained.delta), (Some(100), 20, 0.4));
}

#[test]
fn fragment_tables_round_trip() {
    let counts: BTreeMap<u32, u64> = [(7, 3), (12345, 1), (u32::MAX, 40)].into_iter().collect();
    let text = write_counts(&counts, "test");
    let file = parse_table(&text).unwrap();
    assert_eq!(file.source.as_deref(), Some("test"));
    assert_eq!(file.data, TableData::Counts(counts.clone()));
    assert_eq!(file.into_table().unwrap(), FragmentTable::from_counts(counts).unwrap());
    assert!(parse_table("not-a-table\t1\n").is_err());
    assert!(parse_table("molga-fragments\t2\n").is_err());
    assert!(parse_table("molga-fragments\t1\nkind\tcounts\nx\t3\n").is_err());
}

#[test]
fn fragdb_reproduces_a_table_that_scores_molecules() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.tsv");
    let n = molga::experiments::cmd_fragdb("bundled", &path).unwrap();
    assert!(n > 100);
    let table = load_table(path.to_str().unwrap()).unwrap();
    let sa = sa_score(&parse_smiles("CC(=O)Nc1ccc(O)cc1").unwrap(), &table);
    assert!((1.0..=10.0).contains(&sa));
    assert!(parse_table(BUNDLED_TABLE).is_ok());
}

#[test]
fn alphabet_files_round_trip() {
    for a in [Alphabet::default_21(), Alphabet::extended()] {
        let text = write_alphabet(&a, "x");
        assert_eq!(parse_alphabet(&text).unwrap(), a);
    }
    let broken = "[[symbol]]\ntoken = \"[Xx]\"\nkind = \"atom\"\nelement = \"Xx\"\nbond = 1\ndigit = 0\n";
    assert!(matches!(parse_alphabet(broken), Err(Error::Alphabet(_))));
}

#[test]
fn report_lists_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    match cmd_report(dir.path()) {
        Err(Error::MissingFiles { missing, .. }) => assert_eq!(missing, vec!["config.resolved".to_string()]),
        other => panic!("{other:?}"),
    }
    let config = RunConfig::default().resolve(Kind::Evolve).unwrap();
    std::fs::write(dir.path().join("config.resolved"), config.to_toml()).unwrap();
    match cmd_report(dir.path()) {
        Err(Error::MissingFiles { missing, .. }) => {
            assert!(missing.contains(&"summary.json".to_string()));
            assert!(missing.iter().any(|m| m.starts_with("trajectory")));
        }
        other => panic!("{other:?}"),
    }
}
