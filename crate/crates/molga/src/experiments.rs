//! The experiment commands. Each writes `config.resolved`, its data files
//! and a `summary.json` into a fresh run directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use molga_core::chem::Perceived;
use molga_core::descriptors::{penalized_logp, BuiltinDescriptors, FitnessRecord, NormalizationParams};
use molga_core::fingerprint::{morgan_fp_perceived, tanimoto, Fingerprint, DEFAULT_RADIUS, DEFAULT_WIDTH};
use molga_core::ga::{
    hypervolume_2d, methane_seed, pareto_front, BestRecord, Constraint, GAState, GenerationStats, Individual,
    Objective, Problem,
};
use molga_core::selfies::{decode, encode, random_selfies};
use molga_core::smiles::parse_smiles;
use molga_core::{seeded_rng, Alphabet, MoleculeGraph, SelfiesString};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Kind, RunConfig, RESOLVED_FILE};
use crate::dataset::{load_dataset, Dataset};
use crate::output::*;
use crate::{alphabet_file, fragments, Error};

/// Molecules averaged for the "top molecules" summary value.
pub const TOP_K: usize = 10;

pub fn fingerprint(mol: &MoleculeGraph) -> Fingerprint {
    morgan_fp_perceived(&Perceived::new(mol), DEFAULT_RADIUS, DEFAULT_WIDTH).expect("default width")
}

/// Loaded inputs shared by every seed of a run.
pub struct Context {
    pub config: RunConfig,
    pub alphabet: Alphabet,
    pub dataset: Dataset,
    pub provider: BuiltinDescriptors,
    pub params: NormalizationParams,
    pub reference: Vec<Fingerprint>,
    /// Scores of the dataset molecules, in dataset order.
    pub dataset_records: Vec<FitnessRecord>,
}

impl Context {
    /// Loads everything `config` names. With normalization from the
    /// dataset, the computed values are written back into the config.
    pub fn build(mut config: RunConfig) -> Result<Context, Error> {
        let alphabet = alphabet_file::load_alphabet(&config.data.alphabet)?;
        let dataset = load_dataset(&config.data.dataset)?;
        let provider = BuiltinDescriptors::new(fragments::load_table(&config.data.fragments)?);
        let defaults = config.normalization.params()?;
        let records: Vec<FitnessRecord> = dataset
            .entries
            .par_iter()
            .map(|e| penalized_logp(&e.mol, &defaults, &provider))
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Dataset(e.to_string()))?;
        let params = if config.normalization.from_dataset {
            let raw: Vec<_> = records.iter().map(|r| r.raw).collect();
            let p = NormalizationParams::from_samples(&raw).map_err(|e| Error::Dataset(e.to_string()))?;
            config.normalization.set(&p);
            p
        } else {
            defaults
        };
        let dataset_records = records.into_iter().map(|r| FitnessRecord::from_raw(r.raw, &params)).collect();
        let reference = dataset.entries.par_iter().map(|e| fingerprint(&e.mol)).collect();
        Ok(Context { config, alphabet, dataset, provider, params, reference, dataset_records })
    }

    pub fn problem(&self, objective: Objective, constraint: Option<Constraint>) -> Problem<'_> {
        Problem {
            alphabet: &self.alphabet,
            provider: &self.provider,
            params: self.params,
            objective,
            constraint,
            reference: &self.reference,
        }
    }

    /// Dataset indices ordered by J, best first; ties keep file order.
    pub fn ranked_dataset(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.dataset.len()).collect();
        idx.sort_by(|&a, &b| self.dataset_records[b].j.total_cmp(&self.dataset_records[a].j));
        idx
    }

    /// Generation-0 strings: methane, or the best encodable dataset
    /// molecules.
    pub fn initial_population(&self) -> Result<Vec<SelfiesString>, Error> {
        if self.config.data.initial == "dataset" {
            let seeds: Vec<SelfiesString> = self
                .ranked_dataset()
                .into_iter()
                .filter_map(|i| encode(&self.dataset.entries[i].mol, &self.alphabet).ok())
                .filter(|s| s.len() <= self.config.ga.max_len)
                .take(self.config.ga.pop_size)
                .collect();
            if seeds.is_empty() {
                return Err(Error::Config("no dataset molecule is expressible in the alphabet".into()));
            }
            return Ok(seeds);
        }
        methane_seed(&self.alphabet)
            .map(|s| vec![s])
            .ok_or_else(|| Error::Config("alphabet has no [C] symbol for the methane seed".into()))
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Error> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.output.workers.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub error: String,
}

/// What a command hands back to the CLI.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub completed: Vec<u64>,
    pub failures: Vec<Failure>,
}

impl RunOutcome {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BestJson {
    pub generation: usize,
    pub selfies: String,
    pub smiles: String,
    pub j: f64,
    pub total: f64,
    pub heavy_atoms: usize,
    pub similarity_to_target: Option<f64>,
}

impl From<&BestRecord> for BestJson {
    fn from(b: &BestRecord) -> Self {
        BestJson {
            generation: b.generation,
            selfies: b.selfies.clone(),
            smiles: b.smiles.clone(),
            j: b.j,
            total: b.total,
            heavy_atoms: b.heavy_atoms,
            similarity_to_target: b.similarity_to_target,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub generations: usize,
    pub final_max_j: f64,
    pub final_mean_j: f64,
    pub final_max_total: f64,
    pub final_internal_diversity: f64,
    pub final_fraction_unique: f64,
    pub final_mean_heavy_atoms: f64,
    pub final_mean_d: Option<f64>,
    /// Mean J of the best distinct molecules (by total) of the last
    /// generation.
    pub top_mean_j: f64,
    pub triggered_generations: Vec<usize>,
    pub best: Option<BestJson>,
}

/// Mean J of the `k` best distinct molecules by total fitness.
pub fn top_mean_j(population: &[Individual], k: usize) -> f64 {
    let mut order: Vec<&Individual> = population.iter().collect();
    order.sort_by(|a, b| b.fitness.total.total_cmp(&a.fitness.total));
    let mut seen = BTreeSet::new();
    let top: Vec<f64> =
        order.into_iter().filter(|p| seen.insert(p.eval.key.clone())).take(k).map(|p| p.fitness.j).collect();
    top.iter().sum::<f64>() / top.len().max(1) as f64
}

struct SeedRun {
    summary: SeedSummary,
    stats: Vec<GenerationStats>,
    archive: Vec<(String, f64, usize)>,
}

fn write_resolved(dir: &Path, config: &RunConfig) -> Result<(), Error> {
    write_text(&dir.join(RESOLVED_FILE), &config.to_toml())
}

/// One GA run, writing its trajectory as it goes.
fn run_seed(ctx: &Context, dir: &Path, seed: u64, objective: Objective, keep_archive: bool) -> Result<SeedRun, Error> {
    let mut config = ctx.config.ga_config(seed)?;
    config.keep_archive = keep_archive;
    let problem = ctx.problem(objective, None);
    let initial = ctx.initial_population()?;
    let mut traj = RowWriter::create(&dir.join(trajectory_file(seed)), &TRAJECTORY_HEADER)?;
    let mut sched = RowWriter::create(&dir.join(schedule_file(seed)), &SCHEDULE_HEADER)?;
    let mut state = GAState::new(config, problem, &initial)?;
    let first = state.stats()[0].clone();
    traj.row(trajectory_row(&first))?;
    sched.row(schedule_row(&first))?;
    while !state.is_finished() {
        let s = state.step()?;
        traj.row(trajectory_row(s))?;
        sched.row(schedule_row(s))?;
    }
    if let Some(model) = state.model() {
        save_model(&dir.join(model_file(seed)), model)?;
    }
    let mut pop = String::from("# smiles\tselfies\tJ\ttotal\n");
    for p in state.population() {
        pop.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            p.eval.key,
            p.selfies.to_text(&ctx.alphabet),
            num(p.fitness.j),
            num(p.fitness.total)
        ));
    }
    write_text(&dir.join(population_file(seed)), &pop)?;
    let best = state.best().map(BestJson::from);
    write_json(&dir.join(best_file(seed)), &best)?;
    let top = top_mean_j(state.population(), TOP_K);
    let archive = state.archive().iter().map(|(k, &(j, h))| (k.as_str().to_string(), j, h)).collect();
    let traj = state.into_trajectory();
    let last = traj.stats.last().expect("generation 0 is recorded");
    let summary = SeedSummary {
        seed,
        generations: last.generation,
        final_max_j: last.max_j,
        final_mean_j: last.mean_j,
        final_max_total: last.max_total,
        final_internal_diversity: last.internal_diversity,
        final_fraction_unique: last.fraction_unique,
        final_mean_heavy_atoms: last.mean_heavy_atoms,
        final_mean_d: last.mean_d,
        top_mean_j: top,
        triggered_generations: traj.stats.iter().filter(|s| s.triggered).map(|s| s.generation).collect(),
        best,
    };
    Ok(SeedRun { summary, stats: traj.stats, archive })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Per-generation mean and population standard deviation across seeds.
fn write_aggregate(path: &Path, runs: &[&SeedRun]) -> Result<(), Error> {
    let mut w = RowWriter::create(path, &["generation", "metric", "mean", "std", "n"])?;
    let len = runs.iter().map(|r| r.stats.len()).min().unwrap_or(0);
    type Metric = fn(&GenerationStats) -> Option<f64>;
    let metrics: [(&str, Metric); 8] = [
        ("max_J", |s| Some(s.max_j)),
        ("mean_J", |s| Some(s.mean_j)),
        ("max_total", |s| Some(s.max_total)),
        ("beta_used", |s| Some(s.beta_used)),
        ("internal_diversity", |s| Some(s.internal_diversity)),
        ("fraction_unique", |s| Some(s.fraction_unique)),
        ("mean_heavy_atoms", |s| Some(s.mean_heavy_atoms)),
        ("mean_D", |s| s.mean_d),
    ];
    for g in 0..len {
        for (name, f) in metrics {
            let values: Vec<f64> = runs.iter().filter_map(|r| f(&r.stats[g])).collect();
            if values.is_empty() {
                continue;
            }
            let (m, s) = mean_std(&values);
            w.row([g.to_string(), name.to_string(), num(m), num(s), values.len().to_string()])?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GaRunSummary<'a> {
    kind: &'a str,
    seeds: Vec<u64>,
    completed: Vec<u64>,
    failures: &'a [Failure],
    per_seed: Vec<&'a SeedSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<&'a str>,
}

fn ga_command(
    ctx: &Context,
    kind: Kind,
    objective: Objective,
    keep_archive: bool,
    dir: &Path,
) -> Result<(RunOutcome, Vec<Option<SeedRun>>), Error> {
    let seeds = ctx.config.seeds();
    let results: Vec<Result<SeedRun, Error>> = ctx
        .pool()?
        .install(|| seeds.par_iter().map(|&s| run_seed(ctx, dir, s, objective.clone(), keep_archive)).collect());
    let mut failures = Vec::new();
    let mut completed = Vec::new();
    let mut runs = Vec::new();
    for (&seed, r) in seeds.iter().zip(results) {
        match r {
            Ok(run) => {
                completed.push(seed);
                runs.push(Some(run));
            }
            Err(e) => {
                failures.push(Failure { seed, error: e.to_string() });
                runs.push(None);
            }
        }
    }
    let ok: Vec<&SeedRun> = runs.iter().flatten().collect();
    if !ok.is_empty() {
        write_aggregate(&dir.join("aggregate.csv"), &ok)?;
    }
    let target = matches!(kind, Kind::Rediscovery | Kind::Similarity).then_some(ctx.config.task.target.as_str());
    let summary = GaRunSummary {
        kind: kind.as_str(),
        seeds: seeds.clone(),
        completed: completed.clone(),
        failures: &failures,
        per_seed: ok.iter().map(|r| &r.summary).collect(),
        target,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok((RunOutcome { dir: dir.to_path_buf(), completed, failures }, runs))
}

fn prepare(config: RunConfig, kind: Kind) -> Result<(Context, PathBuf), Error> {
    let config = config.resolve(kind)?;
    let ctx = Context::build(config)?;
    let c = &ctx.config;
    let dir = create_run_dir(&c.output.out, kind, c.ga.seed, c.output.overwrite)?;
    write_resolved(&dir, c)?;
    if !ctx.dataset.skips.is_empty() {
        write_text(&dir.join("dataset_skips.tsv"), &ctx.dataset.skip_log())?;
    }
    Ok((ctx, dir))
}

pub fn cmd_evolve(config: RunConfig) -> Result<RunOutcome, Error> {
    let (ctx, dir) = prepare(config, Kind::Evolve)?;
    Ok(ga_command(&ctx, Kind::Evolve, Objective::PenalizedLogP, false, &dir)?.0)
}

fn target_fingerprint(ctx: &Context) -> Result<Fingerprint, Error> {
    let mol = parse_smiles(&ctx.config.task.target).map_err(|e| Error::Config(format!("task target: {e}")))?;
    Ok(fingerprint(&mol))
}

pub fn cmd_rediscovery(config: RunConfig) -> Result<RunOutcome, Error> {
    let (ctx, dir) = prepare(config, Kind::Rediscovery)?;
    let target = target_fingerprint(&ctx)?;
    Ok(ga_command(&ctx, Kind::Rediscovery, Objective::Rediscovery(target), false, &dir)?.0)
}

pub fn cmd_similarity(config: RunConfig) -> Result<RunOutcome, Error> {
    let (ctx, dir) = prepare(config, Kind::Similarity)?;
    let target = target_fingerprint(&ctx)?;
    let objective = Objective::Similarity { target, threshold: ctx.config.task.threshold };
    Ok(ga_command(&ctx, Kind::Similarity, objective, false, &dir)?.0)
}

#[derive(Serialize)]
struct BaselineSummary {
    seed: u64,
    samples: usize,
    length: usize,
    alphabet: String,
    alphabet_size: usize,
    mean_j: f64,
    std_j: f64,
    best_smiles: String,
    best_j: f64,
    mean_heavy_atoms: f64,
}

#[derive(Serialize)]
struct DatasetBest {
    smiles: String,
    line: usize,
    j: f64,
    dataset_size: usize,
    dataset_mean_j: f64,
}

#[derive(Serialize)]
struct BaselineRunSummary<'a> {
    kind: &'a str,
    per_seed: Vec<BaselineSummary>,
    best_of_dataset: DatasetBest,
    failures: &'a [Failure],
}

/// Random SELFIES scored by J, plus the best molecule of the dataset.
pub fn cmd_baseline(config: RunConfig) -> Result<RunOutcome, Error> {
    let (ctx, dir) = prepare(config, Kind::Baseline)?;
    let c = &ctx.config;
    let pool = ctx.pool()?;
    let mut per_seed = Vec::new();
    let mut failures = Vec::new();
    let mut completed = Vec::new();
    for seed in c.seeds() {
        let mut rng = seeded_rng(seed);
        let strings: Vec<SelfiesString> = (0..c.baseline.samples)
            .map(|_| random_selfies(c.baseline.length, &ctx.alphabet, &mut rng, c.ga.max_len))
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Config(e.to_string()))?;
        let scored: Result<Vec<(MoleculeGraph, FitnessRecord)>, _> = pool.install(|| {
            strings
                .par_iter()
                .map(|s| {
                    let mol = decode(s, &ctx.alphabet);
                    penalized_logp(&mol, &ctx.params, &ctx.provider).map(|r| (mol, r))
                })
                .collect()
        });
        let scored = match scored {
            Ok(s) => s,
            Err(e) => {
                failures.push(Failure { seed, error: e.to_string() });
                continue;
            }
        };
        let mut w = RowWriter::create(
            &dir.join(format!("samples-s{seed}.csv")),
            &["index", "selfies", "smiles", "J", "logP", "SA", "ring_penalty", "heavy_atoms"],
        )?;
        for (i, (s, (mol, r))) in strings.iter().zip(&scored).enumerate() {
            w.row([
                i.to_string(),
                s.to_text(&ctx.alphabet),
                molga_core::smiles::write_smiles(mol),
                num(r.j),
                num(r.raw.logp),
                num(r.raw.sa),
                num(r.raw.ring_penalty),
                mol.heavy_atom_count().to_string(),
            ])?;
        }
        let js: Vec<f64> = scored.iter().map(|(_, r)| r.j).collect();
        let (mean_j, std_j) = if js.is_empty() { (0.0, 0.0) } else { mean_std(&js) };
        let best = (0..scored.len()).max_by(|&a, &b| js[a].total_cmp(&js[b]).then(b.cmp(&a)));
        let heavy: Vec<f64> = scored.iter().map(|(m, _)| m.heavy_atom_count() as f64).collect();
        per_seed.push(BaselineSummary {
            seed,
            samples: js.len(),
            length: c.baseline.length,
            alphabet: c.data.alphabet.clone(),
            alphabet_size: ctx.alphabet.len(),
            mean_j,
            std_j,
            best_smiles: best.map(|i| molga_core::smiles::write_smiles(&scored[i].0)).unwrap_or_default(),
            best_j: best.map_or(f64::NAN, |i| js[i]),
            mean_heavy_atoms: if heavy.is_empty() { 0.0 } else { mean_std(&heavy).0 },
        });
        completed.push(seed);
    }
    let top = ctx.ranked_dataset()[0];
    let dataset_js: Vec<f64> = ctx.dataset_records.iter().map(|r| r.j).collect();
    let summary = BaselineRunSummary {
        kind: "baseline",
        per_seed,
        best_of_dataset: DatasetBest {
            smiles: ctx.dataset.entries[top].smiles.clone(),
            line: ctx.dataset.entries[top].line,
            j: ctx.dataset_records[top].j,
            dataset_size: ctx.dataset.len(),
            dataset_mean_j: mean_std(&dataset_js).0,
        },
        failures: &failures,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(RunOutcome { dir, completed, failures })
}

/// One row of the constrained results table.
#[derive(Clone, Debug, Serialize)]
pub struct ConstrainedRow {
    pub seed: u64,
    pub target_rank: usize,
    pub target_smiles: String,
    pub target_j: f64,
    pub best_smiles: String,
    pub best_j: Option<f64>,
    pub similarity: Option<f64>,
    pub improvement: Option<f64>,
    pub success: bool,
}

#[derive(Serialize)]
struct ConstrainedSummary<'a> {
    kind: &'a str,
    delta: f64,
    targets: usize,
    runs: usize,
    success_rate: f64,
    mean_improvement: f64,
    std_improvement: f64,
    /// Reported feasible molecules whose recomputed similarity is below
    /// delta.
    violations: usize,
    failures: &'a [Failure],
}

/// Recomputes the similarity of a reported molecule to its target.
pub fn verify_feasible(best_smiles: &str, target: &MoleculeGraph, delta: f64) -> Result<(f64, bool), Error> {
    let mol = parse_smiles(best_smiles).map_err(|e| Error::Dataset(format!("{best_smiles}: {e}")))?;
    let sim = tanimoto(&fingerprint(&mol), &fingerprint(target)).expect("default widths");
    Ok((sim, sim >= delta))
}

fn run_constrained_target(ctx: &Context, seed: u64, rank: usize, index: usize) -> Result<ConstrainedRow, Error> {
    let entry = &ctx.dataset.entries[index];
    let target_j = ctx.dataset_records[index].j;
    let start = encode(&entry.mol, &ctx.alphabet).map_err(|e| Error::Dataset(format!("{}: {e}", entry.smiles)))?;
    let constraint = Constraint { target: fingerprint(&entry.mol), target_j, delta: ctx.config.constrained.delta };
    let problem = ctx.problem(Objective::PenalizedLogP, Some(constraint));
    let mut config = ctx.config.ga_config(seed)?;
    config.max_len = config.max_len.max(start.len());
    let traj = molga_core::ga::run(config, problem, &[start])?;
    let best = traj.best.as_ref();
    let improvement = best.map(|b| b.j - target_j);
    Ok(ConstrainedRow {
        seed,
        target_rank: rank,
        target_smiles: entry.smiles.clone(),
        target_j,
        best_smiles: best.map(|b| b.smiles.clone()).unwrap_or_default(),
        best_j: best.map(|b| b.j),
        similarity: best.and_then(|b| b.similarity_to_target),
        improvement,
        success: improvement.is_some_and(|i| i > 0.0),
    })
}

/// Constrained optimization of the K lowest-J dataset molecules.
pub fn cmd_constrained(config: RunConfig) -> Result<RunOutcome, Error> {
    let (ctx, dir) = prepare(config, Kind::Constrained)?;
    let c = &ctx.config;
    let mut targets = ctx.ranked_dataset();
    targets.reverse();
    targets.truncate(c.constrained.targets);
    let jobs: Vec<(u64, usize, usize)> =
        c.seeds().into_iter().flat_map(|s| targets.iter().enumerate().map(move |(r, &i)| (s, r, i))).collect();
    let results: Vec<Result<ConstrainedRow, Error>> = ctx
        .pool()?
        .install(|| jobs.par_iter().map(|&(s, r, i)| run_constrained_target(&ctx, s, r, i)).collect());
    let mut w = RowWriter::create(
        &dir.join("results.csv"),
        &[
            "seed",
            "target_rank",
            "target_smiles",
            "target_J",
            "best_smiles",
            "best_J",
            "similarity",
            "verified_similarity",
            "improvement",
            "feasible",
            "success",
        ],
    )?;
    let mut failures = Vec::new();
    let mut completed = BTreeSet::new();
    let mut improvements = Vec::new();
    let mut successes = 0;
    let mut violations = 0;
    for (&(seed, _, index), r) in jobs.iter().zip(results) {
        let row = match r {
            Ok(row) => row,
            Err(e) => {
                failures.push(Failure { seed, error: e.to_string() });
                continue;
            }
        };
        let mut verified = None;
        if row.best_j.is_some() {
            let (sim, ok) = verify_feasible(&row.best_smiles, &ctx.dataset.entries[index].mol, c.constrained.delta)?;
            verified = Some(sim);
            violations += usize::from(!ok);
        }
        if let Some(i) = row.improvement {
            improvements.push(i);
        }
        successes += usize::from(row.success);
        w.row([
            row.seed.to_string(),
            row.target_rank.to_string(),
            row.target_smiles.clone(),
            num(row.target_j),
            row.best_smiles.clone(),
            opt(row.best_j),
            opt(row.similarity),
            opt(verified),
            opt(row.improvement),
            (row.best_j.is_some() as u8).to_string(),
            (row.success as u8).to_string(),
        ])?;
        completed.insert(seed);
    }
    let failed: BTreeSet<u64> = failures.iter().map(|f| f.seed).collect();
    let runs = jobs.len() - failures.len();
    let (mean_imp, std_imp) = if improvements.is_empty() { (0.0, 0.0) } else { mean_std(&improvements) };
    let summary = ConstrainedSummary {
        kind: "constrained",
        delta: c.constrained.delta,
        targets: targets.len(),
        runs,
        success_rate: if runs == 0 { 0.0 } else { successes as f64 / runs as f64 },
        mean_improvement: mean_imp,
        std_improvement: std_imp,
        violations,
        failures: &failures,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    let completed = completed.difference(&failed).copied().collect();
    Ok(RunOutcome { dir, completed, failures })
}

#[derive(Serialize)]
struct ParetoSummary {
    nadir: (f64, f64),
    dataset_hypervolume: f64,
    dataset_front_size: usize,
    per_seed: Vec<ParetoSeed>,
}

#[derive(Serialize)]
struct ParetoSeed {
    seed: u64,
    hypervolume: f64,
    front_size: usize,
    archive_size: usize,
}

/// (J, -heavy atoms) objective pairs.
fn objectives(points: &[(String, f64, usize)]) -> Vec<(f64, f64)> {
    points.iter().map(|&(_, j, h)| (j, -(h as f64))).collect()
}

fn write_front(path: &Path, points: &[(String, f64, usize)], front: &[usize]) -> Result<(), Error> {
    let mut w = RowWriter::create(path, &["smiles", "J", "neg_heavy_atoms"])?;
    for &i in front {
        let (s, j, h) = &points[i];
        w.row([s.clone(), num(*j), num(-(*h as f64))])?;
    }
    Ok(())
}

/// GA runs whose distinct molecules are reduced to a (J, -heavy atoms)
/// Pareto front and compared with the dataset's front.
pub fn cmd_pareto(config: RunConfig) -> Result<RunOutcome, Error> {
    let (ctx, dir) = prepare(config, Kind::Pareto)?;
    let (outcome, runs) = ga_command(&ctx, Kind::Pareto, Objective::PenalizedLogP, true, &dir)?;
    let dataset_points: Vec<(String, f64, usize)> = ctx
        .dataset
        .entries
        .iter()
        .zip(&ctx.dataset_records)
        .map(|(e, r)| (e.smiles.clone(), r.j, e.mol.heavy_atom_count()))
        .collect();
    let dataset_front = pareto_front(&objectives(&dataset_points));
    write_front(&dir.join("dataset_front.csv"), &dataset_points, &dataset_front)?;
    let mut fronts = Vec::new();
    for run in runs.iter().flatten() {
        let front = pareto_front(&objectives(&run.archive));
        write_front(&dir.join(front_file(run.summary.seed)), &run.archive, &front)?;
        fronts.push((run, front));
    }
    // Worst corner over every front point, so all of them dominate it.
    let mut nadir = (f64::INFINITY, f64::INFINITY);
    let all = dataset_front
        .iter()
        .map(|&i| &dataset_points[i])
        .chain(fronts.iter().flat_map(|(run, f)| f.iter().map(|&i| &run.archive[i])));
    for (_, j, h) in all {
        nadir.0 = nadir.0.min(*j);
        nadir.1 = nadir.1.min(-(*h as f64));
    }
    let hv = |points: &[(String, f64, usize)], front: &[usize]| -> Result<f64, Error> {
        let pts: Vec<(f64, f64)> = front.iter().map(|&i| (points[i].1, -(points[i].2 as f64))).collect();
        hypervolume_2d(&pts, nadir).map_err(|e| Error::Config(e.to_string()))
    };
    let summary = ParetoSummary {
        nadir,
        dataset_hypervolume: hv(&dataset_points, &dataset_front)?,
        dataset_front_size: dataset_front.len(),
        per_seed: fronts
            .iter()
            .map(|(run, f)| {
                Ok(ParetoSeed {
                    seed: run.summary.seed,
                    hypervolume: hv(&run.archive, f)?,
                    front_size: f.len(),
                    archive_size: run.archive.len(),
                })
            })
            .collect::<Result<_, Error>>()?,
    };
    write_json(&dir.join("pareto.json"), &summary)?;
    Ok(outcome)
}

/// Counts radius-2 environments over the dataset and writes a fragment
/// table file.
pub fn cmd_fragdb(dataset: &str, out: &Path) -> Result<usize, Error> {
    let data = load_dataset(dataset)?;
    let counts = fragments::count_fragments(data.entries.par_iter().map(|e| &e.mol));
    let source = format!("{} ({} molecules), radius-2 environments", dataset, data.len());
    write_text(out, &fragments::write_counts(&counts, &source))?;
    Ok(counts.len())
}

pub fn run_kind(kind: Kind, config: RunConfig) -> Result<RunOutcome, Error> {
    match kind {
        Kind::Baseline => cmd_baseline(config),
        Kind::Evolve => cmd_evolve(config),
        Kind::Constrained => cmd_constrained(config),
        Kind::Pareto => cmd_pareto(config),
        Kind::Rediscovery => cmd_rediscovery(config),
        Kind::Similarity => cmd_similarity(config),
    }
}
