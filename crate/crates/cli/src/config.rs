use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wlalign::embed::{AdamConfig, NegativeSampling, Schedule, TrainConfig};
use wlalign::relabel::RelabelMode;
use wlalign::Exec;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Command {
    Synth,
    Relabel,
    Align,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Synth => "synth",
            Command::Relabel => "relabel",
            Command::Align => "align",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Full,
    /// Rank by final-round tuple similarity instead of embeddings.
    WithoutRl,
    /// Context objective only.
    WithoutWl,
    /// Hard relabeling feeding the full trainer.
    WithoutSim,
    /// Hard relabeling; candidates ranked by label match.
    WithoutSimRl,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Full,
        Variant::WithoutRl,
        Variant::WithoutWl,
        Variant::WithoutSim,
        Variant::WithoutSimRl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::WithoutRl => "wo-rl",
            Variant::WithoutWl => "wo-wl",
            Variant::WithoutSim => "wo-sim",
            Variant::WithoutSimRl => "wo-sim-rl",
        }
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown variant `{s}` (full, wo-rl, wo-wl, wo-sim, wo-sim-rl)"))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Node and edge percentages varied one at a time.
    PerAxis,
    /// Every (node, edge) combination.
    Crossed,
}

/// Every setting of every command. Unused keys are still recorded in the
/// manifest so that one file describes a run completely.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub exec: Exec,

    pub source: Option<PathBuf>,
    pub target: Option<PathBuf>,
    pub directed: bool,
    /// Ground-truth correspondence, split by `train_ratio`.
    pub pairs: Option<PathBuf>,
    /// Explicit training anchors; overrides the split of `pairs`.
    pub anchors: Option<PathBuf>,
    /// Explicit held-out pairs, used with `anchors`.
    pub test: Option<PathBuf>,
    pub train_ratio: f64,

    pub n: usize,
    pub p: f64,
    pub node_grid: Vec<f64>,
    pub edge_grid: Vec<f64>,
    pub grid: GridKind,
    pub attach: usize,

    pub mode: RelabelMode,
    pub max_relabel_rounds: usize,

    pub variant: Variant,
    pub dim: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub epochs: usize,
    pub k_label: usize,
    pub k_context: usize,
    pub batch_size: usize,
    pub batches_per_round: Option<usize>,
    pub schedule: Schedule,
    pub max_rounds: usize,
    pub fcl_epochs: usize,
    pub plateau_tol: f64,
    pub plateau_window: usize,
    pub share_anchors: bool,
    pub negatives: NegativeSampling,
    pub rsa_lambda: f64,
    pub top_n: usize,
}

const GRID: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];

impl ExperimentConfig {
    pub fn defaults(command: Command) -> Self {
        let train = TrainConfig::default();
        ExperimentConfig {
            seed: 0,
            out_dir: PathBuf::from("out"),
            exec: Exec::default(),
            source: None,
            target: None,
            directed: false,
            pairs: None,
            anchors: None,
            test: None,
            train_ratio: if command == Command::Synth { 0.2 } else { 0.5 },
            n: 1000,
            p: 0.01,
            node_grid: GRID.to_vec(),
            edge_grid: GRID.to_vec(),
            grid: GridKind::PerAxis,
            attach: 1,
            mode: RelabelMode::Soft,
            max_relabel_rounds: train.max_relabel_rounds,
            variant: Variant::Full,
            dim: train.dim,
            lr: train.adam.lr,
            beta1: train.adam.beta1,
            beta2: train.adam.beta2,
            eps: train.adam.eps,
            epochs: train.epochs,
            k_label: train.k_label,
            k_context: train.k_context,
            batch_size: train.batch_size,
            batches_per_round: train.batches_per_round,
            schedule: train.schedule,
            max_rounds: train.max_rounds,
            fcl_epochs: train.fcl_epochs,
            plateau_tol: train.plateau_tol,
            plateau_window: train.plateau_window,
            share_anchors: train.share_anchors,
            negatives: train.negatives,
            rsa_lambda: 0.5,
            top_n: 30,
        }
    }

    /// Sets one key from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        let bad = |e: String| CliError::Usage(format!("{key}={v}: {e}"));
        fn num<T: FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            v.parse().map_err(|e: T::Err| e.to_string())
        }
        let path = |v: &str| (!v.is_empty()).then(|| PathBuf::from(v));
        match key {
            "seed" => self.seed = num(v).map_err(bad)?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            "exec" => self.exec = parse_exec(v).map_err(bad)?,
            "source" => self.source = path(v),
            "target" => self.target = path(v),
            "directed" => self.directed = num(v).map_err(bad)?,
            "pairs" => self.pairs = path(v),
            "anchors" => self.anchors = path(v),
            "test" => self.test = path(v),
            "train_ratio" => self.train_ratio = num(v).map_err(bad)?,
            "n" => self.n = num(v).map_err(bad)?,
            "p" => self.p = num(v).map_err(bad)?,
            "node_grid" => self.node_grid = parse_list(v).map_err(bad)?,
            "edge_grid" => self.edge_grid = parse_list(v).map_err(bad)?,
            "grid" => {
                self.grid = match v {
                    "per-axis" => GridKind::PerAxis,
                    "crossed" => GridKind::Crossed,
                    _ => return Err(bad("expected per-axis or crossed".into())),
                }
            }
            "attach" => self.attach = num(v).map_err(bad)?,
            "mode" => self.mode = v.parse().map_err(bad)?,
            "max_relabel_rounds" => self.max_relabel_rounds = num(v).map_err(bad)?,
            "variant" => self.variant = v.parse().map_err(bad)?,
            "dim" => self.dim = num(v).map_err(bad)?,
            "lr" => self.lr = num(v).map_err(bad)?,
            "beta1" => self.beta1 = num(v).map_err(bad)?,
            "beta2" => self.beta2 = num(v).map_err(bad)?,
            "eps" => self.eps = num(v).map_err(bad)?,
            "epochs" => self.epochs = num(v).map_err(bad)?,
            "k_label" => self.k_label = num(v).map_err(bad)?,
            "k_context" => self.k_context = num(v).map_err(bad)?,
            "batch_size" => self.batch_size = num(v).map_err(bad)?,
            "batches_per_round" => {
                self.batches_per_round = if v == "auto" { None } else { Some(num(v).map_err(bad)?) }
            }
            "schedule" => {
                self.schedule = match v {
                    "interleaved" => Schedule::Interleaved,
                    "fcl" => Schedule::Fcl,
                    _ => return Err(bad("expected interleaved or fcl".into())),
                }
            }
            "max_rounds" => self.max_rounds = num(v).map_err(bad)?,
            "fcl_epochs" => self.fcl_epochs = num(v).map_err(bad)?,
            "plateau_tol" => self.plateau_tol = num(v).map_err(bad)?,
            "plateau_window" => self.plateau_window = num(v).map_err(bad)?,
            "share_anchors" => self.share_anchors = num(v).map_err(bad)?,
            "negatives" => self.negatives = parse_negatives(v).map_err(bad)?,
            "rsa_lambda" => self.rsa_lambda = num(v).map_err(bad)?,
            "top_n" => self.top_n = num(v).map_err(bad)?,
            _ => return Err(CliError::Usage(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Every key with its canonical textual value.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let entries: Vec<(&str, String)> = vec![
            ("seed", self.seed.to_string()),
            ("out_dir", self.out_dir.display().to_string()),
            ("exec", exec_name(self.exec).into()),
            ("source", path(&self.source)),
            ("target", path(&self.target)),
            ("directed", self.directed.to_string()),
            ("pairs", path(&self.pairs)),
            ("anchors", path(&self.anchors)),
            ("test", path(&self.test)),
            ("train_ratio", self.train_ratio.to_string()),
            ("n", self.n.to_string()),
            ("p", self.p.to_string()),
            ("node_grid", list(&self.node_grid)),
            ("edge_grid", list(&self.edge_grid)),
            (
                "grid",
                match self.grid {
                    GridKind::PerAxis => "per-axis",
                    GridKind::Crossed => "crossed",
                }
                .into(),
            ),
            ("attach", self.attach.to_string()),
            ("mode", self.mode.to_string()),
            ("max_relabel_rounds", self.max_relabel_rounds.to_string()),
            ("variant", self.variant.to_string()),
            ("dim", self.dim.to_string()),
            ("lr", self.lr.to_string()),
            ("beta1", self.beta1.to_string()),
            ("beta2", self.beta2.to_string()),
            ("eps", self.eps.to_string()),
            ("epochs", self.epochs.to_string()),
            ("k_label", self.k_label.to_string()),
            ("k_context", self.k_context.to_string()),
            ("batch_size", self.batch_size.to_string()),
            (
                "batches_per_round",
                self.batches_per_round.map_or("auto".into(), |b| b.to_string()),
            ),
            (
                "schedule",
                match self.schedule {
                    Schedule::Interleaved => "interleaved",
                    Schedule::Fcl => "fcl",
                }
                .into(),
            ),
            ("max_rounds", self.max_rounds.to_string()),
            ("fcl_epochs", self.fcl_epochs.to_string()),
            ("plateau_tol", self.plateau_tol.to_string()),
            ("plateau_window", self.plateau_window.to_string()),
            ("share_anchors", self.share_anchors.to_string()),
            (
                "negatives",
                match self.negatives {
                    NegativeSampling::Uniform => "uniform".into(),
                    NegativeSampling::Unigram(p) => format!("unigram:{p}"),
                },
            ),
            ("rsa_lambda", self.rsa_lambda.to_string()),
            ("top_n", self.top_n.to_string()),
        ];
        entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// SHA-256 over the sorted `key=value` lines, leaving out `out_dir` and
    /// `exec` so that a rerun elsewhere or single-threaded hashes the same.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.to_pairs() {
            if k != "out_dir" && k != "exec" {
                h.update(format!("{k}={v}\n").as_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn train_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            dim: self.dim,
            adam: AdamConfig {
                lr: self.lr,
                beta1: self.beta1,
                beta2: self.beta2,
                eps: self.eps,
            },
            k_label: self.k_label,
            k_context: self.k_context,
            batch_size: self.batch_size,
            batches_per_round: self.batches_per_round,
            epochs: self.epochs,
            schedule: self.schedule,
            max_rounds: self.max_rounds,
            fcl_epochs: self.fcl_epochs,
            max_relabel_rounds: self.max_relabel_rounds,
            plateau_tol: self.plateau_tol,
            plateau_window: self.plateau_window,
            relabel_mode: self.mode,
            use_label_loss: true,
            share_anchors: self.share_anchors,
            negatives: self.negatives,
            seed,
        }
    }

    /// Applies a config file: either flat `key = value` lines (`#` starts a
    /// comment) or a `manifest.json` written by an earlier run.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if text.trim_start().starts_with('{') {
            let m: crate::manifest::Manifest =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            for (k, v) in &m.config {
                self.set(k, v)?;
            }
            return Ok(());
        }
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key = value", path.display(), no + 1)))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }
}

fn parse_exec(v: &str) -> Result<Exec, String> {
    match v {
        "parallel" => Ok(Exec::Parallel),
        "sequential" => Ok(Exec::Sequential),
        _ => Err("expected parallel or sequential".into()),
    }
}

fn exec_name(e: Exec) -> &'static str {
    match e {
        Exec::Parallel => "parallel",
        Exec::Sequential => "sequential",
    }
}

fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect()
}

fn parse_negatives(v: &str) -> Result<NegativeSampling, String> {
    match v.split_once(':') {
        None if v == "uniform" => Ok(NegativeSampling::Uniform),
        None if v == "unigram" => Ok(NegativeSampling::Unigram(0.75)),
        Some(("unigram", p)) => p.parse().map(NegativeSampling::Unigram).map_err(|e| format!("{e}")),
        _ => Err("expected uniform or unigram[:power]".into()),
    }
}
