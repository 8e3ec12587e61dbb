use std::collections::BTreeMap;

use serde::Serialize;
use wlalign::embed::derive_seed;
use wlalign::graph::{generate_er, perturb, sample_anchors, write_edge_list, PerturbationRecord};

use crate::config::{Command, ExperimentConfig, GridKind};
use crate::data::{create_dir, write_pairs};
use crate::error::CliResult;
use crate::manifest::{write_json, Manifest};

#[derive(Serialize)]
struct PairInfo<'a> {
    name: &'a str,
    node_pct: f64,
    edge_pct: f64,
    perturbation: &'a PerturbationRecord,
}

/// The perturbation cells for the configured grid, with their directory names.
pub fn grid_cells(cfg: &ExperimentConfig) -> Vec<(String, f64, f64)> {
    match cfg.grid {
        GridKind::PerAxis => cfg
            .node_grid
            .iter()
            .map(|&x| (format!("node-{x}"), x, 0.0))
            .chain(cfg.edge_grid.iter().map(|&y| (format!("edge-{y}"), 0.0, y)))
            .collect(),
        GridKind::Crossed => cfg
            .node_grid
            .iter()
            .flat_map(|&x| cfg.edge_grid.iter().map(move |&y| (format!("node-{x}_edge-{y}"), x, y)))
            .collect(),
    }
}

/// Writes `base.edges` and, per grid cell, `pairs/<cell>/` holding
/// `source.edges`, `target.edges`, `correspondence.tsv`, `anchors.tsv`,
/// `test.tsv` and `perturbation.json`.
pub fn run(cfg: &ExperimentConfig) -> CliResult<()> {
    let out = &cfg.out_dir;
    create_dir(out)?;
    let mut seeds = BTreeMap::from([
        ("seed".to_string(), cfg.seed),
        ("graph".to_string(), derive_seed(cfg.seed, 1)),
        ("anchors".to_string(), derive_seed(cfg.seed, 2)),
    ]);

    let base = generate_er(cfg.n, cfg.p, seeds["graph"])?;
    write_edge_list(&out.join("base.edges"), &base)?;
    let corr: Vec<_> = (0..cfg.n).map(|i| (i, i)).collect();

    for (k, (name, node_pct, edge_pct)) in grid_cells(cfg).into_iter().enumerate() {
        let seed = derive_seed(cfg.seed, 100 + k as u64);
        seeds.insert(format!("perturb/{name}"), seed);
        let (target, record) = perturb(&base, node_pct, edge_pct, cfg.attach, seed)?;
        let (anchors, test) = sample_anchors(cfg.n, target.node_count(), &corr, cfg.train_ratio, seeds["anchors"])?;
        let dir = out.join("pairs").join(&name);
        create_dir(&dir)?;
        write_edge_list(&dir.join("source.edges"), &base)?;
        write_edge_list(&dir.join("target.edges"), &target)?;
        write_pairs(&dir.join("correspondence.tsv"), &corr)?;
        write_pairs(&dir.join("anchors.tsv"), anchors.pairs())?;
        write_pairs(&dir.join("test.tsv"), &test)?;
        let info = PairInfo {
            name: &name,
            node_pct,
            edge_pct,
            perturbation: &record,
        };
        write_json(&dir.join("perturbation.json"), &info)?;
        log::info!("{name}: target has {} nodes, {} edges", target.node_count(), target.undirected_edge_count());
    }
    write_json(&out.join("manifest.json"), &Manifest::new(Command::Synth, cfg, seeds))
}
