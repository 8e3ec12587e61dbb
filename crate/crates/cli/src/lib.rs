//! Experiment driver for `wlalign`: synthetic graph pairs, relabeling
//! quality runs and end-to-end alignment with ablation variants.

pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod manifest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Command, ExperimentConfig, Variant};
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "wlalign", version, about = "Network alignment experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Generate an E-R base graph and its perturbed copies.
    Synth(Common),
    /// Run relabeling to convergence and report label quality.
    Relabel(Common),
    /// Train, rank held-out pairs and write an evaluation report.
    Align(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` file or a previous run's manifest.json.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// full, wo-rl, wo-wl, wo-sim or wo-sim-rl.
    #[arg(long)]
    pub variant: Option<String>,
    /// soft or hard.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub train_ratio: Option<f64>,
    /// Any other config key, as `key=value`. Repeatable.
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl Sub {
    fn parts(&self) -> (Command, &Common) {
        match self {
            Sub::Synth(c) => (Command::Synth, c),
            Sub::Relabel(c) => (Command::Relabel, c),
            Sub::Align(c) => (Command::Align, c),
        }
    }
}

/// Defaults, then the config file, then `--set` pairs, then named flags.
pub fn resolve(command: Command, args: &Common) -> CliResult<ExperimentConfig> {
    let mut cfg = ExperimentConfig::defaults(command);
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{kv}`")))?;
        cfg.set(k.trim(), v)?;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(d) = &args.out_dir {
        cfg.out_dir = d.clone();
    }
    if let Some(v) = &args.variant {
        cfg.set("variant", v)?;
    }
    if let Some(m) = &args.mode {
        cfg.set("mode", m)?;
    }
    if let Some(r) = args.train_ratio {
        cfg.train_ratio = r;
    }
    Ok(cfg)
}

/// Thread cap for parallel sections, from `WLALIGN_THREADS`.
pub const THREADS_ENV: &str = "WLALIGN_THREADS";

pub fn run(cli: &Cli) -> CliResult<()> {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok());
    wlalign::exec::init_thread_pool(threads);
    let (command, args) = cli.command.parts();
    let cfg = resolve(command, args)?;
    match command {
        Command::Synth => commands::synth::run(&cfg),
        Command::Relabel => commands::relabel::run(&cfg),
        Command::Align => commands::align::run(&cfg).map(|_| ()),
    }
}
