use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use wlalign::embed::derive_seed;
use wlalign::relabel::{coverage_ratio, label_histogram_similarity, relabel_until_convergence, RoundTrace, Side};

use crate::config::{Command, ExperimentConfig};
use crate::data::{create_dir, Dataset};
use crate::error::{CliError, CliResult};
use crate::manifest::{write_json, Manifest};

#[derive(Debug, Serialize)]
pub struct LabelQuality {
    pub mode: String,
    pub rounds: usize,
    pub converged: bool,
    pub label_count: usize,
    pub histogram_similarity: f64,
    pub coverage_s: f64,
    pub coverage_t: f64,
}

/// `round,new_labels,newly_labeled,label_count`; wall-clock times go to
/// `timings.json` so this file is reproducible.
pub fn write_round_csv(path: &Path, trace: &[RoundTrace]) -> CliResult<()> {
    let mut text = String::from("round,new_labels,newly_labeled,label_count\n");
    for r in trace {
        text.push_str(&format!("{},{},{},{}\n", r.round, r.new_labels, r.newly_labeled, r.label_count));
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| wlalign::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
    Ok(())
}

/// Writes `labels.tsv`, `quality.json`, `rounds.csv`, `timings.json`, the id
/// maps and `manifest.json`.
pub fn run(cfg: &ExperimentConfig) -> CliResult<()> {
    let seeds = BTreeMap::from([("seed".to_string(), cfg.seed), ("split".to_string(), derive_seed(cfg.seed, 3))]);
    let data = Dataset::load(cfg, seeds["split"])?;
    let out = &cfg.out_dir;
    create_dir(out)?;
    write_json(&out.join("manifest.json"), &Manifest::new(Command::Relabel, cfg, seeds))?;
    data.write_id_maps(out)?;

    let outcome = relabel_until_convergence(&data.g_s, &data.g_t, &data.anchors, cfg.mode, cfg.max_relabel_rounds, cfg.exec);
    let (eval_s, eval_t) = data.eval_nodes();
    let quality = LabelQuality {
        mode: cfg.mode.to_string(),
        rounds: outcome.rounds,
        converged: outcome.converged,
        label_count: outcome.state.label_count,
        histogram_similarity: label_histogram_similarity(&outcome.state, &eval_s, &eval_t),
        coverage_s: coverage_ratio(&outcome.state, &eval_s, Side::Source).unwrap_or(0.0),
        coverage_t: coverage_ratio(&outcome.state, &eval_t, Side::Target).unwrap_or(0.0),
    };
    outcome.state.write_dump(&out.join("labels.tsv"))?;
    write_json(&out.join("quality.json"), &quality)?;
    write_round_csv(&out.join("rounds.csv"), &outcome.trace)?;
    let timings: BTreeMap<String, f64> = outcome
        .trace
        .iter()
        .map(|r| (format!("round_{:04}", r.round), r.elapsed_secs))
        .collect();
    write_json(&out.join("timings.json"), &timings)?;
    log::info!(
        "{} mode: {} rounds, {} labels, similarity {:.4}, coverage {:.4}/{:.4}",
        quality.mode,
        quality.rounds,
        quality.label_count,
        quality.histogram_similarity,
        quality.coverage_s,
        quality.coverage_t
    );
    if !outcome.converged {
        return Err(CliError::NotConverged(format!("labels still changing after {} rounds", outcome.rounds)));
    }
    Ok(())
}
