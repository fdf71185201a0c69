use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use molga::config::{Kind, Overrides, RunConfig};
use molga::{alphabet_file, experiments, report};

#[derive(Parser)]
#[command(name = "molga", version, about = "SELFIES genetic algorithm experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score random SELFIES and the best dataset molecule.
    Baseline(RunArgs),
    /// Evolve from methane (or the dataset) under a beta schedule.
    Evolve(RunArgs),
    /// Improve the lowest-J dataset molecules within a similarity bound.
    Constrained(RunArgs),
    /// Evolve, then extract (J, -heavy atoms) Pareto fronts.
    Pareto(RunArgs),
    /// Maximize similarity to a target molecule.
    Rediscovery(RunArgs),
    /// Reach a similarity threshold to a target molecule.
    Similarity(RunArgs),
    /// Turn a finished run directory into tidy plot data.
    Report { run_dir: PathBuf },
    /// Count fragment environments over a dataset into a table file.
    Fragdb {
        #[arg(long, default_value = "bundled")]
        dataset: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print an alphabet file (`default` or `extended`).
    Alphabet {
        #[arg(default_value = "default")]
        name: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML file mirroring these flags; flags take precedence.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long)]
    fragments: Option<String>,
    /// Generation 0: `methane` or `dataset`.
    #[arg(long)]
    initial: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, value_parser = ["const", "time", "sim"])]
    schedule: Option<String>,
    #[arg(long)]
    patience: Option<usize>,
    #[arg(long)]
    start_generation: Option<usize>,
    #[arg(long)]
    sim_threshold: Option<f64>,
    /// Keep an adaptive penalty until the best J changes.
    #[arg(long)]
    hold_until_change: bool,
    #[arg(long, value_parser = ["original", "flipped"])]
    labels: Option<String>,
    #[arg(long, value_parser = ["mlp", "logistic", "none"])]
    disc: Option<String>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    pop_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    overwrite: bool,
    #[arg(long)]
    workers: Option<usize>,
    /// Recompute the normalization constants from the dataset.
    #[arg(long)]
    normalize_from_dataset: bool,
    /// Baseline sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Constrained target count.
    #[arg(long)]
    targets: Option<usize>,
    /// Constrained similarity bound.
    #[arg(long)]
    delta: Option<f64>,
    /// Target SMILES for rediscovery and similarity.
    #[arg(long)]
    target: Option<String>,
}

impl RunArgs {
    fn into_config(self) -> anyhow::Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        config.apply(&Overrides {
            dataset: self.dataset,
            alphabet: self.alphabet,
            fragments: self.fragments,
            initial: self.initial,
            beta: self.beta,
            schedule: self.schedule,
            patience: self.patience,
            start_generation: self.start_generation,
            sim_threshold: self.sim_threshold,
            hold_until_change: self.hold_until_change,
            labels: self.labels,
            disc: self.disc,
            generations: self.generations,
            pop_size: self.pop_size,
            seed: self.seed,
            repeats: self.repeats,
            out: self.out,
            overwrite: self.overwrite,
            workers: self.workers,
            normalize_from_dataset: self.normalize_from_dataset,
            samples: self.samples,
            targets: self.targets,
            delta: self.delta,
            target: self.target,
        });
        Ok(config)
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (kind, args) = match cli.command {
        Command::Baseline(a) => (Kind::Baseline, a),
        Command::Evolve(a) => (Kind::Evolve, a),
        Command::Constrained(a) => (Kind::Constrained, a),
        Command::Pareto(a) => (Kind::Pareto, a),
        Command::Rediscovery(a) => (Kind::Rediscovery, a),
        Command::Similarity(a) => (Kind::Similarity, a),
        Command::Report { run_dir } => {
            let out = report::cmd_report(&run_dir)?;
            println!("{}", out.display());
            return Ok(true);
        }
        Command::Fragdb { dataset, out } => {
            let n = experiments::cmd_fragdb(&dataset, &out)?;
            log::info!("{n} environments written to {}", out.display());
            return Ok(true);
        }
        Command::Alphabet { name } => {
            let alphabet = alphabet_file::load_alphabet(&name)?;
            print!("{}", alphabet_file::write_alphabet(&alphabet, &name));
            return Ok(true);
        }
    };
    let config = args.into_config()?;
    let outcome = experiments::run_kind(kind, config).with_context(|| format!("{kind} failed"))?;
    for f in &outcome.failures {
        log::error!("seed {}: {}", f.seed, f.error);
    }
    println!("{}", outcome.dir.display());
    Ok(outcome.success())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(2)
        }
    }
}
