//! Genetic algorithm over SELFIES strings.
//!
//! Each generation keeps the elite, refills the population with mutated
//! copies of rank-selected parents, optionally trains the discriminator on
//! reference versus population, and scores everyone with J + beta * D.

mod pareto;
mod schedule;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng as _;

pub use pareto::{dominates, hypervolume_2d, pareto_front, NadirError};
pub use schedule::{similarity_triggered, stagnation_triggered, BetaSchedule};
use schedule::{keep_last, ScheduleState};

use crate::chem::{canonical_key, CanonicalKey, MoleculeGraph, Perceived};
use crate::descriptors::{
    ring_penalty_from, DescriptorError, DescriptorProvider, FitnessRecord, NormalizationParams, RawDescriptors,
};
use crate::discriminator::{
    featurize, shuffle, train_generation, Architecture, DiscriminatorError, DiscriminatorModel, FeatureVector,
    Hyperparams, LabelConvention, TrainSchedule,
};
use crate::fingerprint::{
    fraction_unique, internal_diversity, morgan_fp_perceived, tanimoto, Fingerprint, DEFAULT_RADIUS, DEFAULT_WIDTH,
};
use crate::selfies::{decode, Alphabet, SelfiesString};
use crate::{seeded_rng, Rng};

/// Total fitness given to molecules outside the similarity constraint.
pub const REJECTED: f64 = -1e6;

#[derive(Clone, Debug, PartialEq)]
pub enum GaError {
    Config(String),
    Descriptor(DescriptorError),
    Discriminator(DiscriminatorError),
}

impl fmt::Display for GaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaError::Config(why) => write!(f, "invalid GA configuration: {why}"),
            GaError::Descriptor(e) => e.fmt(f),
            GaError::Discriminator(e) => e.fmt(f),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GaError {}

impl From<DescriptorError> for GaError {
    fn from(e: DescriptorError) -> Self {
        GaError::Descriptor(e)
    }
}

impl From<DiscriminatorError> for GaError {
    fn from(e: DiscriminatorError) -> Self {
        GaError::Discriminator(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MutationWeights {
    pub replace: f64,
    pub insert: f64,
    pub delete: f64,
}

impl Default for MutationWeights {
    fn default() -> Self {
        MutationWeights { replace: 1.0, insert: 1.0, delete: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationKind {
    Replace,
    Insert,
    Delete,
}

/// One point mutation with a uniformly drawn position and symbol. The
/// result is truncated to `max_len`.
pub fn mutate(
    s: &SelfiesString,
    alphabet: &Alphabet,
    weights: &MutationWeights,
    max_len: usize,
    rng: &mut Rng,
) -> SelfiesString {
    let total = weights.replace + weights.insert + weights.delete;
    let u = rng.gen::<f64>() * total;
    let mut kind = if u < weights.replace {
        MutationKind::Replace
    } else if u < weights.replace + weights.insert {
        MutationKind::Insert
    } else {
        MutationKind::Delete
    };
    if s.is_empty() {
        kind = MutationKind::Insert;
    } else if kind == MutationKind::Delete && s.len() == 1 {
        kind = MutationKind::Replace;
    }
    let n = alphabet.len() as u8;
    s.edited(max_len, |sym| match kind {
        MutationKind::Replace => {
            let at = rng.gen_range(0..sym.len());
            sym[at] = rng.gen_range(0..n);
        }
        MutationKind::Insert => {
            let at = rng.gen_range(0..=sym.len());
            sym.insert(at, rng.gen_range(0..n));
        }
        MutationKind::Delete => {
            let at = rng.gen_range(0..sym.len());
            sym.remove(at);
        }
    })
}

/// Linear ranking weights: worst gets 1, best gets N, ties share the mean
/// of their ranks.
pub fn rank_weights(fitness: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
    let mut w = vec![0.0; fitness.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && fitness[order[j]].total_cmp(&fitness[order[i]]).is_eq() {
            j += 1;
        }
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            w[k] = rank;
        }
        i = j;
    }
    w
}

/// `count` indices drawn with replacement, proportional to rank.
pub fn select_parents(fitness: &[f64], count: usize, rng: &mut Rng) -> Vec<usize> {
    if fitness.is_empty() || count == 0 {
        return Vec::new();
    }
    let mut cumulative = rank_weights(fitness);
    for i in 1..cumulative.len() {
        cumulative[i] += cumulative[i - 1];
    }
    let total = *cumulative.last().unwrap();
    (0..count)
        .map(|_| {
            let u = rng.gen::<f64>() * total;
            cumulative.partition_point(|&c| c <= u).min(fitness.len() - 1)
        })
        .collect()
}

/// What J measures.
#[derive(Clone, Debug, PartialEq)]
pub enum Objective {
    PenalizedLogP,
    /// Tanimoto similarity to a target.
    Rediscovery(Fingerprint),
    /// Similarity to a target, capped at `threshold` and scaled to [0, 1].
    Similarity { target: Fingerprint, threshold: f64 },
}

/// Feasible molecules must reach `delta` similarity to the target.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub target: Fingerprint,
    pub target_j: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminatorSetup {
    pub architecture: Architecture,
    pub hyper: Hyperparams,
    pub train: TrainSchedule,
    pub reference_size: usize,
    pub labels: LabelConvention,
    pub reinitialize_each_generation: bool,
}

impl Default for DiscriminatorSetup {
    fn default() -> Self {
        DiscriminatorSetup {
            architecture: Architecture::default_mlp(),
            hyper: Hyperparams::default(),
            train: TrainSchedule::default(),
            reference_size: 500,
            labels: LabelConvention::Original,
            reinitialize_each_generation: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GAConfig {
    pub population_size: usize,
    pub generations: usize,
    pub max_len: usize,
    pub schedule: BetaSchedule,
    pub discriminator: Option<DiscriminatorSetup>,
    pub mutation: MutationWeights,
    pub elitism: usize,
    pub seed: u64,
    /// Molecules subsampled for the per-generation diversity metric.
    pub diversity_sample: usize,
    pub diversity_include_diagonal: bool,
    /// Record J and heavy-atom count of every distinct molecule seen.
    pub keep_archive: bool,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            population_size: 500,
            generations: 100,
            max_len: crate::selfies::DEFAULT_MAX_LEN,
            schedule: BetaSchedule::Constant(0.0),
            discriminator: None,
            mutation: MutationWeights::default(),
            elitism: 1,
            seed: 0,
            diversity_sample: 100,
            diversity_include_diagonal: true,
            keep_archive: false,
        }
    }
}

impl GAConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        let fail = |s: &str| Err(GaError::Config(s.into()));
        if self.population_size < 2 {
            return fail("population size must be at least 2");
        }
        if self.elitism >= self.population_size {
            return fail("elitism must be smaller than the population");
        }
        if self.max_len == 0 {
            return fail("max length must be positive");
        }
        let m = self.mutation;
        if [m.replace, m.insert, m.delete].iter().any(|w| !(*w >= 0.0) || !w.is_finite())
            || m.replace + m.insert + m.delete <= 0.0
        {
            return fail("mutation weights must be non-negative with a positive sum");
        }
        match self.schedule {
            BetaSchedule::Constant(b) if !b.is_finite() => return fail("beta must be finite"),
            BetaSchedule::TimeAdaptive { patience, beta, .. } => {
                if patience < 1 {
                    return fail("patience must be at least 1");
                }
                if !beta.is_finite() {
                    return fail("beta must be finite");
                }
            }
            BetaSchedule::SimilarityTriggered { threshold, window, beta, .. } => {
                if !(0.0..=1.0).contains(&threshold) {
                    return fail("similarity threshold must lie in [0, 1]");
                }
                if window < 2 {
                    return fail("similarity window must hold at least 2 molecules");
                }
                if !beta.is_finite() {
                    return fail("beta must be finite");
                }
            }
            _ => {}
        }
        if self.discriminator.is_none() && self.schedule.peak() != 0.0 {
            return fail("a nonzero beta needs a discriminator");
        }
        if let Some(d) = &self.discriminator {
            if d.reference_size == 0 || d.train.batch_size == 0 {
                return fail("reference size and batch size must be positive");
            }
        }
        Ok(())
    }
}

/// Scores that depend on the molecule alone.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    pub mol: MoleculeGraph,
    pub key: CanonicalKey,
    pub raw: RawDescriptors,
    pub fp: Fingerprint,
    pub heavy_atoms: usize,
    /// Objective value before any constraint.
    pub j: f64,
    pub similarity_to_target: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub selfies: SelfiesString,
    pub eval: Arc<Evaluated>,
    pub fitness: FitnessRecord,
    pub feasible: bool,
}

/// Everything the GA scores against.
#[derive(Clone)]
pub struct Problem<'a> {
    pub alphabet: &'a Alphabet,
    pub provider: &'a dyn DescriptorProvider,
    pub params: NormalizationParams,
    pub objective: Objective,
    pub constraint: Option<Constraint>,
    /// Reference-set fingerprints for the discriminator.
    pub reference: &'a [Fingerprint],
}

fn fingerprint_of(p: &Perceived<'_>) -> Fingerprint {
    morgan_fp_perceived(p, DEFAULT_RADIUS, DEFAULT_WIDTH).expect("default width is nonzero")
}

impl Problem<'_> {
    /// Decodes nothing; scores an already decoded molecule.
    pub fn evaluate_molecule(&self, mol: MoleculeGraph) -> Result<Evaluated, GaError> {
        let p = Perceived::new(&mol);
        let fp = fingerprint_of(&p);
        let raw = self.provider.raw(&mol)?;
        debug_assert_eq!(raw.ring_penalty, ring_penalty_from(&p.rings));
        let j = match &self.objective {
            Objective::PenalizedLogP => FitnessRecord::from_raw(raw, &self.params).j,
            Objective::Rediscovery(t) => tanimoto(&fp, t).map_err(|_| GaError::Config("target width".into()))?,
            Objective::Similarity { target, threshold } => {
                let s = tanimoto(&fp, target).map_err(|_| GaError::Config("target width".into()))?;
                if *threshold > 0.0 {
                    s.min(*threshold) / threshold
                } else {
                    1.0
                }
            }
        };
        let similarity_to_target = match &self.constraint {
            Some(c) => Some(tanimoto(&fp, &c.target).map_err(|_| GaError::Config("target width".into()))?),
            None => None,
        };
        let heavy_atoms = mol.heavy_atom_count();
        drop(p);
        let key = canonical_key(&mol);
        Ok(Evaluated { mol, key, raw, fp, heavy_atoms, j, similarity_to_target })
    }

    fn record(&self, e: &Evaluated) -> FitnessRecord {
        let mut r = FitnessRecord::from_raw(e.raw, &self.params);
        r.j = e.j;
        r.total = e.j;
        r
    }
}

/// J (and J + beta * D with a model) of one molecule.
pub fn evaluate(
    mol: &MoleculeGraph,
    params: &NormalizationParams,
    provider: &dyn DescriptorProvider,
    model: Option<&DiscriminatorModel>,
    beta: f64,
) -> Result<FitnessRecord, GaError> {
    let rec = crate::descriptors::penalized_logp(mol, params, provider)?;
    match model {
        Some(m) => Ok(rec.with_discriminator(m.forward(&featurize(mol))?, beta)),
        None => Ok(rec),
    }
}

/// J when the molecule is within `delta` of the target, the rejection
/// sentinel otherwise. Also returns the similarity.
pub fn constrained_evaluate(
    mol: &MoleculeGraph,
    target: &MoleculeGraph,
    delta: f64,
    params: &NormalizationParams,
    provider: &dyn DescriptorProvider,
) -> Result<(FitnessRecord, f64), GaError> {
    let rec = crate::descriptors::penalized_logp(mol, params, provider)?;
    let a = fingerprint_of(&Perceived::new(mol));
    let b = fingerprint_of(&Perceived::new(target));
    let sim = tanimoto(&a, &b).expect("same default width");
    if sim >= delta {
        Ok((rec, sim))
    } else {
        Ok((rec.with_total(REJECTED), sim))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub max_j: f64,
    pub mean_j: f64,
    pub max_total: f64,
    pub mean_total: f64,
    pub beta_used: f64,
    pub triggered: bool,
    pub internal_diversity: f64,
    pub fraction_unique: f64,
    pub mean_heavy_atoms: f64,
    pub mean_d: Option<f64>,
    pub discriminator_loss: Option<f64>,
    /// Highest-total molecule of the generation.
    pub best_smiles: String,
    pub best_j: f64,
    /// Mean pairwise similarity of the best molecules in the schedule
    /// window, when a similarity schedule is active and the window is full.
    pub window_similarity: Option<f64>,
    pub feasible_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestRecord {
    pub generation: usize,
    pub selfies: String,
    pub smiles: String,
    pub j: f64,
    pub total: f64,
    pub heavy_atoms: usize,
    pub similarity_to_target: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub stats: Vec<GenerationStats>,
    pub population: Vec<Individual>,
    pub best: Option<BestRecord>,
    pub archive: BTreeMap<CanonicalKey, (f64, usize)>,
}

pub struct GAState<'a> {
    config: GAConfig,
    problem: Problem<'a>,
    generation: usize,
    population: Vec<Individual>,
    model: Option<DiscriminatorModel>,
    rng: Rng,
    disc_rng: Rng,
    stats_rng: Rng,
    cache: BTreeMap<SelfiesString, Arc<Evaluated>>,
    max_j_history: Vec<f64>,
    best_fps: Vec<Fingerprint>,
    schedule: ScheduleState,
    best: Option<BestRecord>,
    archive: BTreeMap<CanonicalKey, (f64, usize)>,
    stats: Vec<GenerationStats>,
}

/// Stream offsets so the GA, discriminator and metrics draw from
/// independent generators.
const DISC_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;
const STATS_STREAM: u64 = 0xd1b5_4a32_d192_ed03;

/// The one-symbol string for methane under `alphabet`.
pub fn methane_seed(alphabet: &Alphabet) -> Option<SelfiesString> {
    let i = alphabet.index_of("[C]")?;
    SelfiesString::new(vec![i], alphabet, 1).ok()
}

impl<'a> GAState<'a> {
    /// Builds and scores generation 0 from `seeds`, cycled or cut to the
    /// population size.
    pub fn new(config: GAConfig, problem: Problem<'a>, seeds: &[SelfiesString]) -> Result<Self, GaError> {
        config.validate()?;
        if seeds.is_empty() {
            return Err(GaError::Config("no seed strings".into()));
        }
        if config.discriminator.is_some() && problem.reference.is_empty() {
            return Err(GaError::Config("the discriminator needs a non-empty reference set".into()));
        }
        let mut disc_rng = seeded_rng(config.seed ^ DISC_STREAM);
        let model = config
            .discriminator
            .as_ref()
            .map(|d| DiscriminatorModel::new(d.architecture.clone(), DEFAULT_WIDTH, d.hyper, &mut disc_rng));
        let strings: Vec<SelfiesString> =
            (0..config.population_size).map(|i| seeds[i % seeds.len()].prefix(config.max_len)).collect();
        let mut state = GAState {
            rng: seeded_rng(config.seed),
            stats_rng: seeded_rng(config.seed ^ STATS_STREAM),
            disc_rng,
            config,
            problem,
            generation: 0,
            population: Vec::new(),
            model,
            cache: BTreeMap::new(),
            max_j_history: Vec::new(),
            best_fps: Vec::new(),
            schedule: ScheduleState::default(),
            best: None,
            archive: BTreeMap::new(),
            stats: Vec::new(),
        };
        state.advance(strings)?;
        Ok(state)
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn stats(&self) -> &[GenerationStats] {
        &self.stats
    }

    pub fn best(&self) -> Option<&BestRecord> {
        self.best.as_ref()
    }

    pub fn model(&self) -> Option<&DiscriminatorModel> {
        self.model.as_ref()
    }

    pub fn config(&self) -> &GAConfig {
        &self.config
    }

    pub fn max_j_history(&self) -> &[f64] {
        &self.max_j_history
    }

    pub fn archive(&self) -> &BTreeMap<CanonicalKey, (f64, usize)> {
        &self.archive
    }

    pub fn is_finished(&self) -> bool {
        self.generation >= self.config.generations
    }

    /// Population indices sorted best first by total; ties keep index
    /// order.
    fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.population.len()).collect();
        order.sort_by(|&a, &b| self.population[b].fitness.total.total_cmp(&self.population[a].fitness.total));
        order
    }

    /// Runs one generation and returns its statistics.
    pub fn step(&mut self) -> Result<&GenerationStats, GaError> {
        let order = self.ranking();
        let n = self.config.population_size;
        let mut next: Vec<SelfiesString> = Vec::with_capacity(n);
        for &i in order.iter().take(self.config.elitism) {
            next.push(self.population[i].selfies.clone());
        }
        let totals: Vec<f64> = self.population.iter().map(|p| p.fitness.total).collect();
        for parent in select_parents(&totals, n - next.len(), &mut self.rng) {
            let child = mutate(
                &self.population[parent].selfies,
                self.problem.alphabet,
                &self.config.mutation,
                self.config.max_len,
                &mut self.rng,
            );
            next.push(child);
        }
        self.generation += 1;
        self.advance(next)?;
        Ok(self.stats.last().unwrap())
    }

    fn advance(&mut self, strings: Vec<SelfiesString>) -> Result<(), GaError> {
        let mut cache = BTreeMap::new();
        let mut evals = Vec::with_capacity(strings.len());
        for s in &strings {
            let e = match cache.get(s).or_else(|| self.cache.get(s)) {
                Some(e) => Arc::clone(e),
                None => Arc::new(self.problem.evaluate_molecule(decode(s, self.problem.alphabet))?),
            };
            cache.insert(s.clone(), Arc::clone(&e));
            evals.push(e);
        }
        self.cache = cache;

        let (beta, triggered) =
            self.schedule.beta_for(&self.config.schedule, self.generation, &self.max_j_history, &self.best_fps);

        let mut loss = None;
        let mut d_scores = None;
        if let (Some(model), Some(setup)) = (self.model.as_mut(), self.config.discriminator.as_ref()) {
            if setup.reinitialize_each_generation && self.generation > 0 {
                model.reinitialize(&mut self.disc_rng);
            }
            let reference = sample_reference(self.problem.reference, setup.reference_size, &mut self.disc_rng);
            let population: Vec<FeatureVector> = evals.iter().map(|e| features_of(&e.fp)).collect();
            loss = Some(train_generation(model, &reference, &population, setup.labels, setup.train, &mut self.disc_rng)?);
            let scores = population.iter().map(|x| model.forward(x)).collect::<Result<Vec<f64>, _>>()?;
            d_scores = Some(scores);
        }

        let mut population = Vec::with_capacity(strings.len());
        for (i, (s, e)) in strings.into_iter().zip(evals).enumerate() {
            let mut fitness = self.problem.record(&e);
            if let Some(d) = &d_scores {
                fitness = fitness.with_discriminator(d[i], beta);
            }
            let mut feasible = true;
            if let (Some(c), Some(sim)) = (&self.problem.constraint, e.similarity_to_target) {
                if sim < c.delta {
                    feasible = false;
                    fitness = fitness.with_total(REJECTED);
                }
            }
            population.push(Individual { selfies: s, eval: e, fitness, feasible });
        }
        self.population = population;
        self.record_generation(beta, triggered, loss, d_scores.as_deref());
        Ok(())
    }

    fn record_generation(&mut self, beta: f64, triggered: bool, loss: Option<f64>, d: Option<&[f64]>) {
        let pop = &self.population;
        let n = pop.len() as f64;
        let max_j = pop.iter().map(|p| p.fitness.j).fold(f64::NEG_INFINITY, f64::max);
        let mean_j = pop.iter().map(|p| p.fitness.j).sum::<f64>() / n;
        let mean_total = pop.iter().map(|p| p.fitness.total).sum::<f64>() / n;
        let best_i = self.ranking()[0];
        let best = &pop[best_i];
        let max_total = best.fitness.total;

        let k = self.config.diversity_sample.min(pop.len()).max(1);
        let mut idx: Vec<usize> = (0..pop.len()).collect();
        if k < pop.len() {
            shuffle(&mut idx, &mut self.stats_rng);
        }
        let sample: Vec<Fingerprint> = idx[..k].iter().map(|&i| pop[i].eval.fp.clone()).collect();
        let diversity =
            internal_diversity(&sample, self.config.diversity_include_diagonal).expect("non-empty, same width");
        let keys: Vec<CanonicalKey> = pop.iter().map(|p| p.eval.key.clone()).collect();
        let unique = fraction_unique(&keys).expect("non-empty");
        let mean_heavy = pop.iter().map(|p| p.eval.heavy_atoms as f64).sum::<f64>() / n;
        let mean_d = d.map(|d| d.iter().sum::<f64>() / d.len() as f64);

        self.max_j_history.push(max_j);
        self.best_fps.push(best.eval.fp.clone());
        let mut window_similarity = None;
        if let BetaSchedule::SimilarityTriggered { window, .. } = self.config.schedule {
            keep_last(&mut self.best_fps, window);
            if self.best_fps.len() == window {
                window_similarity = crate::fingerprint::mean_pairwise_similarity(&self.best_fps).ok();
            }
        } else {
            keep_last(&mut self.best_fps, 1);
        }

        for p in pop.iter() {
            if !p.feasible {
                continue;
            }
            let better = match &self.best {
                None => true,
                Some(b) => p.fitness.j > b.j,
            };
            if better {
                self.best = Some(BestRecord {
                    generation: self.generation,
                    selfies: p.selfies.to_text(self.problem.alphabet),
                    smiles: p.eval.key.as_str().into(),
                    j: p.fitness.j,
                    total: p.fitness.total,
                    heavy_atoms: p.eval.heavy_atoms,
                    similarity_to_target: p.eval.similarity_to_target,
                });
            }
        }
        if self.config.keep_archive {
            for p in pop.iter().filter(|p| p.feasible) {
                self.archive.entry(p.eval.key.clone()).or_insert((p.fitness.j, p.eval.heavy_atoms));
            }
        }

        self.stats.push(GenerationStats {
            generation: self.generation,
            max_j,
            mean_j,
            max_total,
            mean_total,
            beta_used: beta,
            triggered,
            internal_diversity: diversity,
            fraction_unique: unique,
            mean_heavy_atoms: mean_heavy,
            mean_d,
            discriminator_loss: loss,
            best_smiles: best.eval.key.as_str().into(),
            best_j: best.fitness.j,
            window_similarity,
            feasible_count: pop.iter().filter(|p| p.feasible).count(),
        });
    }

    pub fn into_trajectory(self) -> Trajectory {
        Trajectory { stats: self.stats, population: self.population, best: self.best, archive: self.archive }
    }
}

/// Runs all configured generations.
pub fn run(config: GAConfig, problem: Problem<'_>, seeds: &[SelfiesString]) -> Result<Trajectory, GaError> {
    let mut state = GAState::new(config, problem, seeds)?;
    while !state.is_finished() {
        state.step()?;
    }
    Ok(state.into_trajectory())
}

pub fn features_of(fp: &Fingerprint) -> FeatureVector {
    let mut v = vec![0.0; fp.width()];
    for i in fp.ones() {
        v[i] = 1.0;
    }
    FeatureVector::new(v)
}

/// Up to `n` distinct reference molecules, as features.
fn sample_reference(reference: &[Fingerprint], n: usize, rng: &mut Rng) -> Vec<FeatureVector> {
    if n >= reference.len() {
        return reference.iter().map(features_of).collect();
    }
    // Partial Fisher-Yates over indices.
    let mut idx: Vec<usize> = (0..reference.len()).collect();
    for i in 0..n {
        let j = rng.gen_range(i..idx.len());
        idx.swap(i, j);
    }
    idx[..n].iter().map(|&i| features_of(&reference[i])).collect()
}
