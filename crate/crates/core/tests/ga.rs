use std::collections::{BTreeMap, BTreeSet};

use molga_core::descriptors::{BuiltinDescriptors, FragmentTable, NormalizationParams, PrecomputedDescriptors};
use molga_core::discriminator::{Architecture, DiscriminatorModel, Hyperparams, TrainSchedule};
use molga_core::fingerprint::{morgan_fp, tanimoto, Fingerprint};
use molga_core::ga::{
    constrained_evaluate, evaluate, hypervolume_2d, methane_seed, mutate, pareto_front, rank_weights, run,
    select_parents, similarity_triggered, stagnation_triggered, BetaSchedule, DiscriminatorSetup, GAConfig, GAState,
    MutationWeights, Objective, Problem, REJECTED,
};
use molga_core::selfies::{decode, random_selfies, Alphabet, SelfiesString};
use molga_core::smiles::parse_smiles;
use molga_core::{seeded_rng, MoleculeGraph};
use proptest::prelude::*;
use rand::Rng as _;

const FRAGMENTS: &str = include_str!("../../molga/data/fragments.tsv");
const FIXTURE: &str = include_str!("../../molga/data/zinc_fixture.smi");

fn provider() -> BuiltinDescriptors {
    let counts: BTreeMap<u32, u64> = FRAGMENTS
        .lines()
        .skip(3)
        .map(|l| {
            let (id, n) = l.split_once('\t').unwrap();
            (id.parse().unwrap(), n.parse().unwrap())
        })
        .collect();
    BuiltinDescriptors::new(FragmentTable::from_counts(counts).unwrap())
}

fn mol(s: &str) -> MoleculeGraph {
    parse_smiles(s).unwrap()
}

fn fp(s: &str) -> Fingerprint {
    morgan_fp(&mol(s), 2, 2048).unwrap()
}

fn problem<'a>(alphabet: &'a Alphabet, provider: &'a BuiltinDescriptors, reference: &'a [Fingerprint]) -> Problem<'a> {
    Problem {
        alphabet,
        provider,
        params: NormalizationParams::default(),
        objective: Objective::PenalizedLogP,
        constraint: None,
        reference,
    }
}

fn small_config(generations: usize, seed: u64) -> GAConfig {
    GAConfig { population_size: 40, generations, seed, ..GAConfig::default() }
}

#[test]
fn evaluate_combines_j_and_beta_d() {
    let p = NormalizationParams::default();
    let methane = MoleculeGraph::methane();
    // Choose logP so that J is exactly 2 for an acyclic molecule at mean SA.
    let logp = 2.47 + 1.42 * (2.0 - 0.038 / 0.224);
    let mut table = PrecomputedDescriptors::new();
    table.insert(&methane, logp, 3.05);
    let zero = DiscriminatorModel::zeroed(Architecture::default_mlp(), 2048, Hyperparams::default());
    let r = evaluate(&methane, &p, &table, Some(&zero), 1000.0).unwrap();
    assert!((r.j - 2.0).abs() < 1e-12);
    assert_eq!(r.d, Some(0.5));
    assert!((r.total - 502.0).abs() < 1e-9);
    assert_eq!(evaluate(&methane, &p, &table, Some(&zero), 0.0).unwrap().total, r.j);
    assert_eq!(evaluate(&methane, &p, &table, None, 1000.0).unwrap().total, r.j);
    let mut rng = seeded_rng(1);
    let model = DiscriminatorModel::new(Architecture::default_mlp(), 2048, Hyperparams::default(), &mut rng);
    let neg = evaluate(&methane, &p, &table, Some(&model), -100.0).unwrap();
    assert!(neg.total < neg.j);
}

#[test]
fn uniform_fitness_selects_uniformly() {
    let mut rng = seeded_rng(2);
    let n = 10;
    let draws = 100_000;
    let mut counts = vec![0usize; n];
    for i in select_parents(&vec![1.5; n], draws, &mut rng) {
        counts[i] += 1;
    }
    let expected = draws as f64 / n as f64;
    let sigma = (draws as f64 * 0.1 * 0.9).sqrt();
    for c in counts {
        assert!((c as f64 - expected).abs() < 3.0 * sigma, "{c}");
    }
}

#[test]
fn two_individuals_follow_linear_ranks() {
    assert_eq!(rank_weights(&[0.3, 7.0]), vec![1.0, 2.0]);
    assert_eq!(rank_weights(&[5.0, 1.0, 5.0]), vec![2.5, 1.0, 2.5]);
    let mut rng = seeded_rng(3);
    let draws = 100_000;
    let best = select_parents(&[0.3, 7.0], draws, &mut rng).iter().filter(|&&i| i == 1).count();
    let p = 2.0 / 3.0;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    assert!((best as f64 - p * draws as f64).abs() < 3.0 * sigma, "{best}");
    assert!(select_parents(&[1.0, 2.0], 0, &mut rng).is_empty());
}

#[test]
fn mutation_respects_length_and_seed() {
    let a = Alphabet::default_21();
    let mut rng = seeded_rng(4);
    let full = random_selfies(81, &a, &mut rng, 81).unwrap();
    let insert = MutationWeights { replace: 0.0, insert: 1.0, delete: 0.0 };
    assert_eq!(mutate(&full, &a, &insert, 81, &mut rng).len(), 81);
    let one = methane_seed(&a).unwrap();
    let delete = MutationWeights { replace: 0.0, insert: 0.0, delete: 1.0 };
    assert_eq!(mutate(&one, &a, &delete, 81, &mut rng).len(), 1);
    assert_eq!(mutate(&SelfiesString::empty(), &a, &delete, 81, &mut rng).len(), 1);
    let x = mutate(&full, &a, &MutationWeights::default(), 81, &mut seeded_rng(9));
    let y = mutate(&full, &a, &MutationWeights::default(), 81, &mut seeded_rng(9));
    assert_eq!(x, y);
}

#[test]
fn mutants_always_decode_to_valid_molecules() {
    let a = Alphabet::default_21();
    let mut rng = seeded_rng(5);
    let w = MutationWeights::default();
    for _ in 0..100_000 {
        let len = rng.gen_range(0..=81);
        let s = random_selfies(len, &a, &mut rng, 81).unwrap();
        let m = mutate(&s, &a, &w, 81, &mut rng);
        assert!(m.len() <= 81);
        assert!(decode(&m, &a).validate().is_valid());
    }
}

#[test]
fn stagnation_needs_exact_equality() {
    assert!(stagnation_triggered(&[3.2; 5], 5));
    assert!(!stagnation_triggered(&[3.2, 3.2, 3.2, 3.2, 3.2000001], 5));
    assert!(!stagnation_triggered(&[3.2; 3], 5));
    assert!(stagnation_triggered(&[1.0, 2.0, 3.2, 3.2, 3.2, 3.2, 3.2], 5));
    assert!(!stagnation_triggered(&[0.0, -0.0, 0.0, 0.0, 0.0], 5));
}

fn disjoint(k: usize) -> Fingerprint {
    Fingerprint::from_bits([2 * k, 2 * k + 1], 64, 2).unwrap()
}

#[test]
fn similarity_trigger_examples() {
    let same = vec![fp("c1ccccc1O"); 5];
    assert!(similarity_triggered(&same, 0.9, 5, 20, 20));
    assert!(!similarity_triggered(&same, 0.9, 5, 19, 20));
    assert!(!similarity_triggered(&same[..4], 0.9, 5, 30, 20));
    let apart: Vec<Fingerprint> = (0..5).map(disjoint).collect();
    assert!(!similarity_triggered(&apart, 0.1, 5, 30, 20));
}

#[test]
fn similarity_trigger_matches_brute_force_mean() {
    let set: Vec<Fingerprint> = FIXTURE.lines().take(40).map(fp).collect();
    for w in set.windows(5) {
        let mut sum = 0.0;
        for i in 0..5 {
            for j in i + 1..5 {
                sum += tanimoto(&w[i], &w[j]).unwrap();
            }
        }
        let mean = sum / 10.0;
        for t in [mean - 1e-9, mean + 1e-9] {
            assert_eq!(similarity_triggered(w, t, 5, 25, 20), mean > t);
        }
    }
}

#[test]
fn pareto_examples() {
    assert_eq!(pareto_front(&[(1.0, 1.0)]), vec![0]);
    assert_eq!(pareto_front(&[(0.0, 1.0), (1.0, 0.0), (0.5, 0.5)]), vec![0, 1, 2]);
    assert_eq!(pareto_front(&[(0.0, 0.0), (1.0, 1.0), (1.0, 1.0), (1.0, 0.5)]), vec![1, 2]);
    assert!(pareto_front(&[]).is_empty());
}

fn brute_front(points: &[(f64, f64)]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points.iter().any(|q| {
                let p = points[i];
                q.0 >= p.0 && q.1 >= p.1 && (q.0 > p.0 || q.1 > p.1)
            })
        })
        .collect()
}

#[test]
fn pareto_front_equals_quadratic_oracle() {
    let mut rng = seeded_rng(6);
    for round in 0..1000 {
        let n = rng.gen_range(1..60);
        // Coarse grids force ties in one or both coordinates.
        let grid = if round % 2 == 0 { 8.0 } else { 1000.0 };
        let points: Vec<(f64, f64)> =
            (0..n).map(|_| ((rng.gen::<f64>() * grid).floor(), (rng.gen::<f64>() * grid).floor())).collect();
        assert_eq!(pareto_front(&points), brute_front(&points), "{points:?}");
    }
}

#[test]
fn hypervolume_examples() {
    assert_eq!(hypervolume_2d(&[(1.0, 1.0)], (0.0, 0.0)).unwrap(), 1.0);
    assert_eq!(hypervolume_2d(&[(1.0, 0.5), (0.5, 1.0)], (0.0, 0.0)).unwrap(), 0.75);
    assert_eq!(hypervolume_2d(&[], (0.0, 0.0)).unwrap(), 0.0);
    assert!(hypervolume_2d(&[(1.0, 1.0), (-0.5, 2.0)], (0.0, 0.0)).is_err());
}

#[test]
fn hypervolume_matches_monte_carlo() {
    let mut rng = seeded_rng(7);
    let samples = 1_000_000;
    for _ in 0..20 {
        let n = rng.gen_range(1..=8);
        let nadir = (rng.gen_range(-2.0..0.0), rng.gen_range(-2.0..0.0));
        let front: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0))).collect();
        let hv = hypervolume_2d(&front, nadir).unwrap();
        let (mx, my) = front.iter().fold((nadir.0, nadir.1), |(a, b), p| (a.max(p.0), b.max(p.1)));
        let box_area = (mx - nadir.0) * (my - nadir.1);
        let mut hits = 0usize;
        for _ in 0..samples {
            let x = rng.gen_range(nadir.0..mx);
            let y = rng.gen_range(nadir.1..my);
            if front.iter().any(|p| x <= p.0 && y <= p.1) {
                hits += 1;
            }
        }
        let p = hits as f64 / samples as f64;
        let estimate = p * box_area;
        let sigma = box_area * (p * (1.0 - p) / samples as f64).sqrt();
        assert!((hv - estimate).abs() <= 3.0 * sigma.max(1e-12), "{hv} vs {estimate} ± {sigma}");
    }
}

#[test]
fn constrained_scoring_applies_the_sentinel() {
    let p = NormalizationParams::default();
    let prov = provider();
    let target = mol("CC(=O)Nc1ccc(O)cc1");
    let (r, sim) = constrained_evaluate(&target, &target, 0.4, &p, &prov).unwrap();
    assert_eq!(sim, 1.0);
    assert_eq!(r.total, r.j);
    let mut rejected = 0;
    for line in FIXTURE.lines().take(200) {
        let m = mol(line);
        let (r, sim) = constrained_evaluate(&m, &target, 0.4, &p, &prov).unwrap();
        let independent = tanimoto(&morgan_fp(&m, 2, 2048).unwrap(), &morgan_fp(&target, 2, 2048).unwrap()).unwrap();
        assert_eq!(sim, independent);
        if sim < 0.4 {
            assert_eq!(r.total, REJECTED);
            rejected += 1;
        } else {
            assert_eq!(r.total, r.j);
        }
    }
    assert!(rejected > 0);
}

#[test]
fn zero_generations_keep_only_the_seed_population() {
    let a = Alphabet::default_21();
    let prov = provider();
    let t = run(small_config(0, 1), problem(&a, &prov, &[]), &[methane_seed(&a).unwrap()]).unwrap();
    assert_eq!(t.stats.len(), 1);
    assert_eq!(t.stats[0].generation, 0);
    assert_eq!(t.stats[0].fraction_unique, 1.0 / 40.0);
    assert_eq!(t.population.len(), 40);
}

#[test]
fn one_step_leaves_methane() {
    let a = Alphabet::default_21();
    let prov = provider();
    let seed = methane_seed(&a).unwrap();
    for s in 0..5 {
        let t = run(small_config(1, s), problem(&a, &prov, &[]), &[seed.clone()]).unwrap();
        assert!(t.population.iter().any(|p| p.selfies != seed));
    }
}

#[test]
fn runs_are_deterministic() {
    let a = Alphabet::default_21();
    let prov = provider();
    let reference: Vec<Fingerprint> = FIXTURE.lines().take(30).map(fp).collect();
    let config = GAConfig {
        schedule: BetaSchedule::Constant(-100.0),
        discriminator: Some(DiscriminatorSetup {
            architecture: Architecture::Logistic,
            train: TrainSchedule { batch_size: 16, epochs: 1 },
            reference_size: 20,
            ..DiscriminatorSetup::default()
        }),
        ..small_config(10, 3)
    };
    let seeds = [methane_seed(&a).unwrap()];
    let x = run(config.clone(), problem(&a, &prov, &reference), &seeds).unwrap();
    let y = run(config, problem(&a, &prov, &reference), &seeds).unwrap();
    assert_eq!(x.stats, y.stats);
    assert_eq!(x.best, y.best);
    let keys = |t: &molga_core::ga::Trajectory| t.population.iter().map(|p| p.selfies.clone()).collect::<Vec<_>>();
    assert_eq!(keys(&x), keys(&y));
}

#[test]
fn elitism_keeps_the_best_total() {
    let a = Alphabet::default_21();
    let prov = provider();
    let t = run(small_config(60, 8), problem(&a, &prov, &[]), &[methane_seed(&a).unwrap()]).unwrap();
    for w in t.stats.windows(2) {
        assert!(w[1].max_total >= w[0].max_total);
        assert!(w[1].max_j >= w[0].max_j);
    }
    assert!(t.stats.last().unwrap().max_j > t.stats[0].max_j);
}

/// Replays the time-adaptive trigger from the logged max-J history.
fn expected_triggers(max_j: &[f64], patience: usize, start: usize) -> Vec<bool> {
    let mut window_start = 0;
    let mut out = vec![false];
    for g in 1..max_j.len() {
        let history = &max_j[window_start..g];
        let fire = g >= start
            && history.len() >= patience
            && history[history.len() - patience..].iter().all(|x| x.to_bits() == history[history.len() - 1].to_bits());
        if fire {
            window_start = g;
        }
        out.push(fire);
    }
    out
}

#[test]
fn time_adaptive_beta_applies_exactly_on_triggers() {
    let a = Alphabet::default_21();
    let prov = provider();
    let reference: Vec<Fingerprint> = FIXTURE.lines().take(30).map(fp).collect();
    let config = GAConfig {
        population_size: 20,
        schedule: BetaSchedule::TimeAdaptive { patience: 3, beta: 1000.0, start_generation: 10, hold_until_change: false },
        discriminator: Some(DiscriminatorSetup {
            architecture: Architecture::Logistic,
            train: TrainSchedule { batch_size: 16, epochs: 1 },
            reference_size: 20,
            ..DiscriminatorSetup::default()
        }),
        ..small_config(80, 4)
    };
    let t = run(config, problem(&a, &prov, &reference), &[methane_seed(&a).unwrap()]).unwrap();
    let max_j: Vec<f64> = t.stats.iter().map(|s| s.max_j).collect();
    let expected = expected_triggers(&max_j, 3, 10);
    assert!(expected.iter().filter(|&&e| e).count() >= 2, "the run never stagnated");
    for (s, e) in t.stats.iter().zip(&expected) {
        assert_eq!(s.triggered, *e, "generation {}", s.generation);
        assert_eq!(s.beta_used, if *e { 1000.0 } else { 0.0 });
    }
}

#[test]
fn constrained_runs_only_report_feasible_molecules() {
    let a = Alphabet::default_21();
    let prov = provider();
    let target = mol(FIXTURE.lines().nth(3).unwrap());
    let target_fp = morgan_fp(&target, 2, 2048).unwrap();
    let seed = molga_core::selfies::encode(&target, &a).unwrap();
    let mut pr = problem(&a, &prov, &[]);
    pr.constraint = Some(molga_core::ga::Constraint { target: target_fp.clone(), target_j: 0.0, delta: 0.4 });
    let mut state = GAState::new(small_config(15, 5), pr, &[seed]).unwrap();
    while !state.is_finished() {
        state.step().unwrap();
        for p in state.population() {
            let sim = tanimoto(&p.eval.fp, &target_fp).unwrap();
            assert_eq!(p.feasible, sim >= 0.4);
            if !p.feasible {
                assert_eq!(p.fitness.total, REJECTED);
            }
        }
    }
    let best = state.best().unwrap();
    let m = mol(&best.smiles);
    assert!(tanimoto(&morgan_fp(&m, 2, 2048).unwrap(), &target_fp).unwrap() >= 0.4);
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        GAConfig { population_size: 1, ..GAConfig::default() },
        GAConfig { elitism: 500, ..GAConfig::default() },
        GAConfig { schedule: BetaSchedule::Constant(5.0), ..GAConfig::default() },
        GAConfig {
            schedule: BetaSchedule::TimeAdaptive { patience: 0, beta: 1.0, start_generation: 0, hold_until_change: false },
            discriminator: Some(DiscriminatorSetup::default()),
            ..GAConfig::default()
        },
        GAConfig { schedule: BetaSchedule::similarity(1.5), discriminator: Some(DiscriminatorSetup::default()), ..GAConfig::default() },
    ];
    for c in bad {
        assert!(c.validate().is_err(), "{c:?}");
    }
    assert!(GAConfig::default().validate().is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn selection_never_prefers_worse_ranks(fitness in prop::collection::vec(-5.0f64..5.0, 1..30)) {
        let w = rank_weights(&fitness);
        let total: f64 = w.iter().sum();
        let n = fitness.len() as f64;
        prop_assert!((total - n * (n + 1.0) / 2.0).abs() < 1e-9);
        for i in 0..fitness.len() {
            for j in 0..fitness.len() {
                if fitness[i] > fitness[j] {
                    prop_assert!(w[i] > w[j]);
                }
            }
        }
    }

    #[test]
    fn front_members_are_mutually_non_dominated(pts in prop::collection::vec((0u8..10, 0u8..10), 1..40)) {
        let points: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
        let front = pareto_front(&points);
        let set: BTreeSet<usize> = front.iter().copied().collect();
        prop_assert!(!front.is_empty());
        for &i in &front {
            for &j in &front {
                prop_assert!(!molga_core::ga::dominates(points[i], points[j]));
            }
        }
        for k in 0..points.len() {
            if !set.contains(&k) {
                prop_assert!(front.iter().any(|&i| molga_core::ga::dominates(points[i], points[k])));
            }
        }
    }
}
