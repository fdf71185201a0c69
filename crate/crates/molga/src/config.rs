//! Run configuration. A TOML file mirrors every command-line flag; flags
//! override the file. [`RunConfig::resolve`] fills in every default so the
//! `config.resolved` written next to the outputs is enough to repeat a run.

use std::fmt;
use std::fs;
use std::str::FromStr;

use molga_core::descriptors::{MeanStd, NormalizationParams};
use molga_core::discriminator::{Architecture, Hyperparams, LabelConvention, TrainSchedule};
use molga_core::ga::{BetaSchedule, DiscriminatorSetup, GAConfig, MutationWeights};
use serde::{Deserialize, Serialize};

use crate::Error;

pub const RESOLVED_FILE: &str = "config.resolved";

/// Celecoxib, the default target of the goal-directed tasks.
pub const DEFAULT_TARGET: &str = "Cc1ccc(cc1)-c1cc(nn1-c1ccc(cc1)S(N)(=O)=O)C(F)(F)F";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Baseline,
    Evolve,
    Constrained,
    Pareto,
    Rediscovery,
    Similarity,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::Baseline, Kind::Evolve, Kind::Constrained, Kind::Pareto, Kind::Rediscovery, Kind::Similarity];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Baseline => "baseline",
            Kind::Evolve => "evolve",
            Kind::Constrained => "constrained",
            Kind::Pareto => "pareto",
            Kind::Rediscovery => "rediscovery",
            Kind::Similarity => "similarity",
        }
    }

    /// Kinds whose per-seed outputs are GA trajectories.
    pub fn has_trajectories(self) -> bool {
        matches!(self, Kind::Evolve | Kind::Pareto | Kind::Rediscovery | Kind::Similarity)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind, Error> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub data: DataConfig,
    pub ga: GaSection,
    pub beta: BetaConfig,
    pub discriminator: DiscConfig,
    pub normalization: NormConfig,
    pub baseline: BaselineConfig,
    pub constrained: ConstrainedConfig,
    pub task: TaskConfig,
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// SMILES file, or `bundled` for the shipped fixture.
    pub dataset: String,
    /// `default`, `extended` or an alphabet file.
    pub alphabet: String,
    /// Fragment table file, or `bundled`.
    pub fragments: String,
    /// `methane`, or `dataset` for the best-J dataset molecules.
    pub initial: String,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            dataset: "bundled".into(),
            alphabet: "default".into(),
            fragments: "bundled".into(),
            initial: "methane".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaSection {
    pub generations: Option<usize>,
    pub pop_size: usize,
    pub max_len: usize,
    pub elitism: usize,
    pub seed: u64,
    /// Independent runs with seeds `seed`, `seed + 1`, ...
    pub repeats: usize,
    pub mutation_replace: f64,
    pub mutation_insert: f64,
    pub mutation_delete: f64,
    pub diversity_sample: usize,
    pub diversity_diagonal: bool,
}

impl Default for GaSection {
    fn default() -> Self {
        GaSection {
            generations: None,
            pop_size: 500,
            max_len: 81,
            elitism: 1,
            seed: 0,
            repeats: 1,
            mutation_replace: 1.0,
            mutation_insert: 1.0,
            mutation_delete: 1.0,
            diversity_sample: 100,
            diversity_diagonal: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BetaConfig {
    /// `const`, `time` or `sim`.
    pub schedule: String,
    /// Constant weight, or the penalty weight of an adaptive schedule.
    pub beta: Option<f64>,
    pub patience: usize,
    pub start_generation: Option<usize>,
    pub sim_threshold: f64,
    pub window: usize,
    pub hold_until_change: bool,
}

impl Default for BetaConfig {
    fn default() -> Self {
        BetaConfig {
            schedule: "const".into(),
            beta: None,
            patience: 5,
            start_generation: None,
            sim_threshold: 0.7,
            window: 5,
            hold_until_change: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscConfig {
    /// `mlp`, `logistic` or `none`; unset means `mlp` when beta can be
    /// nonzero.
    pub disc: Option<String>,
    pub hidden: Vec<usize>,
    /// `original` (reference = 1) or `flipped`.
    pub labels: String,
    pub epochs: usize,
    pub batch_size: usize,
    pub reference_size: usize,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub reinitialize: bool,
}

impl Default for DiscConfig {
    fn default() -> Self {
        DiscConfig {
            disc: None,
            hidden: vec![100, 10],
            labels: "original".into(),
            epochs: 10,
            batch_size: 256,
            reference_size: 500,
            learning_rate: 1e-3,
            weight_decay: 1e-4,
            reinitialize: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormConfig {
    /// Recompute the means and deviations from the dataset.
    pub from_dataset: bool,
    pub logp_mean: f64,
    pub logp_std: f64,
    pub sa_mean: f64,
    pub sa_std: f64,
    pub ring_mean: f64,
    pub ring_std: f64,
}

impl Default for NormConfig {
    fn default() -> Self {
        let p = NormalizationParams::default();
        NormConfig {
            from_dataset: false,
            logp_mean: p.logp.mean,
            logp_std: p.logp.std,
            sa_mean: p.sa.mean,
            sa_std: p.sa.std,
            ring_mean: p.ring.mean,
            ring_std: p.ring.std,
        }
    }
}

impl NormConfig {
    pub fn params(&self) -> Result<NormalizationParams, Error> {
        NormalizationParams::new(
            MeanStd { mean: self.logp_mean, std: self.logp_std },
            MeanStd { mean: self.sa_mean, std: self.sa_std },
            MeanStd { mean: self.ring_mean, std: self.ring_std },
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn set(&mut self, p: &NormalizationParams) {
        self.logp_mean = p.logp.mean;
        self.logp_std = p.logp.std;
        self.sa_mean = p.sa.mean;
        self.sa_std = p.sa.std;
        self.ring_mean = p.ring.mean;
        self.ring_std = p.ring.std;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    pub samples: usize,
    pub length: usize,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig { samples: 50_000, length: 81 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstrainedConfig {
    /// Number of lowest-J dataset molecules used as targets.
    pub targets: usize,
    pub delta: f64,
}

impl Default for ConstrainedConfig {
    fn default() -> Self {
        ConstrainedConfig { targets: 20, delta: 0.4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaskConfig {
    pub target: String,
    /// Similarity task: similarity at which the score saturates.
    pub threshold: f64,
}

impl Default for TaskConfig {
    fn default() -> Self {
        TaskConfig { target: DEFAULT_TARGET.into(), threshold: 0.75 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub out: String,
    /// Write to `<out>/<kind>-s<seed>`, replacing earlier contents.
    pub overwrite: bool,
    /// Worker threads for independent seeds and targets; 0 = all cores.
    pub workers: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { out: "runs".into(), overwrite: false, workers: 0 }
    }
}

/// Values given on the command line; `None` keeps the file value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub dataset: Option<String>,
    pub alphabet: Option<String>,
    pub fragments: Option<String>,
    pub initial: Option<String>,
    pub beta: Option<f64>,
    pub schedule: Option<String>,
    pub patience: Option<usize>,
    pub start_generation: Option<usize>,
    pub sim_threshold: Option<f64>,
    pub hold_until_change: bool,
    pub labels: Option<String>,
    pub disc: Option<String>,
    pub generations: Option<usize>,
    pub pop_size: Option<usize>,
    pub seed: Option<u64>,
    pub repeats: Option<usize>,
    pub out: Option<String>,
    pub overwrite: bool,
    pub workers: Option<usize>,
    pub normalize_from_dataset: bool,
    pub samples: Option<usize>,
    pub targets: Option<usize>,
    pub delta: Option<f64>,
    pub target: Option<String>,
}

fn one_of(field: &str, value: &str, allowed: &[&str]) -> Result<(), Error> {
    if allowed.contains(&value) {
        Ok(())
    } else {
        Err(Error::Config(format!("{field} must be one of {allowed:?}, got {value:?}")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, Error> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &str) -> Result<RunConfig, Error> {
        Self::from_toml(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($src:expr => $dst:expr) => {
                if let Some(v) = $src.clone() {
                    $dst = v;
                }
            };
        }
        set!(o.dataset => self.data.dataset);
        set!(o.alphabet => self.data.alphabet);
        set!(o.fragments => self.data.fragments);
        set!(o.initial => self.data.initial);
        if o.beta.is_some() {
            self.beta.beta = o.beta;
        }
        set!(o.schedule => self.beta.schedule);
        set!(o.patience => self.beta.patience);
        if o.start_generation.is_some() {
            self.beta.start_generation = o.start_generation;
        }
        set!(o.sim_threshold => self.beta.sim_threshold);
        self.beta.hold_until_change |= o.hold_until_change;
        set!(o.labels => self.discriminator.labels);
        if o.disc.is_some() {
            self.discriminator.disc = o.disc.clone();
        }
        if o.generations.is_some() {
            self.ga.generations = o.generations;
        }
        set!(o.pop_size => self.ga.pop_size);
        set!(o.seed => self.ga.seed);
        set!(o.repeats => self.ga.repeats);
        set!(o.out => self.output.out);
        self.output.overwrite |= o.overwrite;
        set!(o.workers => self.output.workers);
        self.normalization.from_dataset |= o.normalize_from_dataset;
        set!(o.samples => self.baseline.samples);
        set!(o.targets => self.constrained.targets);
        set!(o.delta => self.constrained.delta);
        set!(o.target => self.task.target);
    }

    /// Fills every defaulted value for `kind` and checks the result.
    pub fn resolve(mut self, kind: Kind) -> Result<RunConfig, Error> {
        if let Some(c) = &self.command {
            if c != kind.as_str() {
                return Err(Error::Config(format!("config was written for `{c}`, not `{kind}`")));
            }
        }
        self.command = Some(kind.as_str().into());
        one_of("schedule", &self.beta.schedule, &["const", "time", "sim"])?;
        one_of("labels", &self.discriminator.labels, &["original", "flipped"])?;
        one_of("initial", &self.data.initial, &["methane", "dataset"])?;
        let default_gens = if kind == Kind::Constrained { 100 } else { 150 };
        self.ga.generations.get_or_insert(default_gens);
        let adaptive = self.beta.schedule != "const";
        self.beta.beta.get_or_insert(if adaptive { 1000.0 } else { 0.0 });
        let default_start = match self.beta.schedule.as_str() {
            "time" => 100,
            "sim" => 20,
            _ => 0,
        };
        self.beta.start_generation.get_or_insert(default_start);
        let beta = self.beta.beta.unwrap_or_default();
        if self.discriminator.disc.is_none() {
            self.discriminator.disc = Some(if beta != 0.0 { "mlp" } else { "none" }.into());
        }
        one_of("disc", self.discriminator.disc.as_deref().unwrap_or_default(), &["mlp", "logistic", "none"])?;
        if self.ga.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.constrained.delta) {
            return Err(Error::Config("delta must lie in [0, 1]".into()));
        }
        if self.baseline.length > self.ga.max_len {
            return Err(Error::Config("baseline length exceeds the max SELFIES length".into()));
        }
        if self.output.workers == 0 {
            self.output.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        }
        self.normalization.params()?;
        self.ga_config(self.ga.seed)?.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(self)
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.ga.repeats as u64).map(|i| self.ga.seed.wrapping_add(i)).collect()
    }

    pub fn kind(&self) -> Option<Kind> {
        self.command.as_deref().and_then(|c| c.parse().ok())
    }

    pub fn schedule(&self) -> BetaSchedule {
        let beta = self.beta.beta.unwrap_or_default();
        let start = self.beta.start_generation.unwrap_or_default();
        match self.beta.schedule.as_str() {
            "time" => BetaSchedule::TimeAdaptive {
                patience: self.beta.patience,
                beta,
                start_generation: start,
                hold_until_change: self.beta.hold_until_change,
            },
            "sim" => BetaSchedule::SimilarityTriggered {
                threshold: self.beta.sim_threshold,
                window: self.beta.window,
                start_generation: start,
                beta,
            },
            _ => BetaSchedule::Constant(beta),
        }
    }

    pub fn discriminator_setup(&self) -> Option<DiscriminatorSetup> {
        let d = &self.discriminator;
        let architecture = match d.disc.as_deref() {
            Some("mlp") => Architecture::Mlp(d.hidden.clone()),
            Some("logistic") => Architecture::Logistic,
            _ => return None,
        };
        Some(DiscriminatorSetup {
            architecture,
            hyper: Hyperparams { learning_rate: d.learning_rate, weight_decay: d.weight_decay, ..Hyperparams::default() },
            train: TrainSchedule { batch_size: d.batch_size, epochs: d.epochs },
            reference_size: d.reference_size,
            labels: if d.labels == "flipped" { LabelConvention::Flipped } else { LabelConvention::Original },
            reinitialize_each_generation: d.reinitialize,
        })
    }

    pub fn ga_config(&self, seed: u64) -> Result<GAConfig, Error> {
        Ok(GAConfig {
            population_size: self.ga.pop_size,
            generations: self.ga.generations.ok_or_else(|| Error::Config("generations unresolved".into()))?,
            max_len: self.ga.max_len,
            schedule: self.schedule(),
            discriminator: self.discriminator_setup(),
            mutation: MutationWeights {
                replace: self.ga.mutation_replace,
                insert: self.ga.mutation_insert,
                delete: self.ga.mutation_delete,
            },
            elitism: self.ga.elitism,
            seed,
            diversity_sample: self.ga.diversity_sample,
            diversity_include_diagonal: self.ga.diversity_diagonal,
            keep_archive: false,
        })
    }
}
