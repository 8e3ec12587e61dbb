use std::collections::BTreeMap;
use std::time::Instant;

use wlalign::embed::{derive_seed, train, write_embeddings, write_trace_csv};
use wlalign::eval::{
    candidate_pool, precision_curve, rank_by_score, rank_candidates, rsa_bucket_report, rsa_scores, write_precision_csv,
    AlignmentRanking, Direction, EvalReport, PrecisionPoint, RunMetadata,
};
use wlalign::graph::NodeId;
use wlalign::relabel::{
    coverage_ratio, cross_similarity_among, label_histogram_similarity, propagate_nodes, relabel_until_convergence,
    LabelState, RelabelMode, Side,
};

use crate::config::{Command, ExperimentConfig, Variant};
use crate::data::{create_dir, Dataset};
use crate::error::{CliError, CliResult};
use crate::manifest::{write_json, Manifest};

struct Aligned {
    forward: AlignmentRanking,
    backward: AlignmentRanking,
    state: Option<LabelState>,
    rounds: usize,
    labels_converged: bool,
    objective_converged: bool,
}

/// Runs one pipeline variant and writes `report.json`, `precision.csv` and
/// `manifest.json`; trained variants add `embeddings.tsv` and `trace.csv`,
/// relabeling variants add `labels.tsv`.
pub fn run(cfg: &ExperimentConfig) -> CliResult<EvalReport> {
    let seeds = BTreeMap::from([
        ("seed".to_string(), cfg.seed),
        ("split".to_string(), derive_seed(cfg.seed, 3)),
        ("train".to_string(), derive_seed(cfg.seed, 4)),
    ]);
    if cfg.top_n == 0 {
        return Err(CliError::Usage("top_n must be at least 1".into()));
    }
    let data = Dataset::load(cfg, seeds["split"])?;
    if data.test.is_empty() {
        return Err(CliError::Usage("no held-out pairs to evaluate".into()));
    }
    let out = &cfg.out_dir;
    create_dir(out)?;
    let manifest = Manifest::new(Command::Align, cfg, seeds.clone());
    write_json(&out.join("manifest.json"), &manifest)?;
    data.write_id_maps(out)?;

    let mut timings = BTreeMap::new();
    let clock = Instant::now();
    let aligned = match cfg.variant {
        Variant::Full | Variant::WithoutWl | Variant::WithoutSim => embed_and_rank(cfg, &data, seeds["train"], &manifest.config_hash)?,
        Variant::WithoutRl => relabel_and_rank(cfg, &data, cfg.mode, tuple_scores)?,
        Variant::WithoutSimRl => relabel_and_rank(cfg, &data, RelabelMode::Hard, label_scores)?,
    };
    timings.insert("align_secs".to_string(), clock.elapsed().as_secs_f64());

    let clock = Instant::now();
    let ns: Vec<usize> = (1..=cfg.top_n).collect();
    let precision: Vec<PrecisionPoint> = precision_curve(&aligned.forward, &aligned.backward, &data.test, &ns)?
        .into_iter()
        .map(|(n, precision)| PrecisionPoint { n, precision })
        .collect();
    let scores = rsa_scores(&data.g_s, &data.g_t, &data.test, &data.anchors, cfg.rsa_lambda, cfg.exec);
    let rsa = rsa_bucket_report(&data.test, &scores, &aligned.forward, &aligned.backward);
    timings.insert("eval_secs".to_string(), clock.elapsed().as_secs_f64());

    let (eval_s, eval_t) = data.eval_nodes();
    let label_metrics = aligned.state.as_ref().map(|st| {
        (
            label_histogram_similarity(st, &eval_s, &eval_t),
            coverage_ratio(st, &eval_s, Side::Source).unwrap_or(0.0),
            coverage_ratio(st, &eval_t, Side::Target).unwrap_or(0.0),
        )
    });
    if let Some(st) = &aligned.state {
        st.write_dump(&out.join("labels.tsv"))?;
    }

    let report = EvalReport {
        metadata: RunMetadata {
            variant: cfg.variant.to_string(),
            seeds,
            config_hash: manifest.config_hash,
            n_source: data.g_s.node_count(),
            n_target: data.g_t.node_count(),
            n_train_anchors: data.anchors.len(),
            n_test_pairs: data.test.len(),
            rounds: aligned.rounds,
            labels_converged: aligned.labels_converged,
            objective_converged: aligned.objective_converged,
        },
        precision,
        rsa: Some(rsa),
        label_similarity: label_metrics.map(|m| m.0),
        coverage_s: label_metrics.map(|m| m.1),
        coverage_t: label_metrics.map(|m| m.2),
        timings,
    };
    write_precision_csv(&out.join("precision.csv"), &report.precision)?;
    write_json(&out.join("report.json"), &report)?;
    log::info!(
        "{}: P@1 {:.4}, P@{} {:.4}",
        cfg.variant,
        report.precision[0].precision,
        cfg.top_n,
        report.precision[cfg.top_n - 1].precision
    );
    if !aligned.labels_converged {
        return Err(CliError::NotConverged(format!("labels still changing after {} rounds", aligned.rounds)));
    }
    Ok(report)
}

fn queries(test: &[(NodeId, NodeId)]) -> (Vec<NodeId>, Vec<NodeId>) {
    let mut s: Vec<_> = test.iter().map(|p| p.0).collect();
    let mut t: Vec<_> = test.iter().map(|p| p.1).collect();
    s.sort_unstable();
    t.sort_unstable();
    (s, t)
}

fn embed_and_rank(cfg: &ExperimentConfig, data: &Dataset, seed: u64, config_hash: &str) -> CliResult<Aligned> {
    let mut tc = cfg.train_config(seed);
    match cfg.variant {
        Variant::WithoutWl => tc.use_label_loss = false,
        Variant::WithoutSim => tc.relabel_mode = RelabelMode::Hard,
        _ => {}
    }
    let outcome = train(&data.g_s, &data.g_t, &data.anchors, &tc, cfg.exec)?;
    let header = serde_json::json!({ "variant": cfg.variant.name(), "config_hash": config_hash, "dim": cfg.dim });
    write_embeddings(&cfg.out_dir.join("embeddings.tsv"), &outcome.store, &header.to_string())?;
    write_trace_csv(&cfg.out_dir.join("trace.csv"), &outcome.trace)?;

    let (qs, qt) = queries(&data.test);
    let (fwd, bwd) = (Direction::SourceToTarget, Direction::TargetToSource);
    let forward = rank_candidates(
        &outcome.store,
        &qs,
        &candidate_pool(data.g_t.node_count(), &data.anchors, fwd),
        fwd,
        cfg.top_n,
        cfg.exec,
    )?;
    let backward = rank_candidates(
        &outcome.store,
        &qt,
        &candidate_pool(data.g_s.node_count(), &data.anchors, bwd),
        bwd,
        cfg.top_n,
        cfg.exec,
    )?;
    Ok(Aligned {
        forward,
        backward,
        state: tc.use_label_loss.then_some(outcome.state),
        rounds: outcome.rounds,
        labels_converged: outcome.labels_converged,
        objective_converged: outcome.objective_converged,
    })
}

type Ranker = fn(&ExperimentConfig, &Dataset, &LabelState, Direction, &[NodeId], &[NodeId]) -> CliResult<AlignmentRanking>;

fn relabel_and_rank(cfg: &ExperimentConfig, data: &Dataset, mode: RelabelMode, ranker: Ranker) -> CliResult<Aligned> {
    let outcome = relabel_until_convergence(&data.g_s, &data.g_t, &data.anchors, mode, cfg.max_relabel_rounds, cfg.exec);
    let (qs, qt) = queries(&data.test);
    let (fwd, bwd) = (Direction::SourceToTarget, Direction::TargetToSource);
    let forward = ranker(cfg, data, &outcome.state, fwd, &qs, &candidate_pool(data.g_t.node_count(), &data.anchors, fwd))?;
    let backward = ranker(cfg, data, &outcome.state, bwd, &qt, &candidate_pool(data.g_s.node_count(), &data.anchors, bwd))?;
    Ok(Aligned {
        forward,
        backward,
        state: Some(outcome.state),
        rounds: outcome.rounds,
        labels_converged: outcome.converged,
        objective_converged: false,
    })
}

/// Cosine of the final-round tuple rows.
fn tuple_scores(
    cfg: &ExperimentConfig,
    data: &Dataset,
    st: &LabelState,
    dir: Direction,
    queries: &[NodeId],
    candidates: &[NodeId],
) -> CliResult<AlignmentRanking> {
    let (qside, cside) = (dir.query_side(), dir.target_side());
    let graph = |side| if side == Side::Source { &data.g_s } else { &data.g_t };
    let tq = propagate_nodes(graph(qside), st.labels(qside), st.label_count, queries, cfg.exec);
    let tc = propagate_nodes(graph(cside), st.labels(cside), st.label_count, candidates, cfg.exec);
    let sim = cross_similarity_among(&tq, queries, &tc, candidates, cfg.exec)?;
    Ok(rank_by_score(dir, queries, candidates, cfg.top_n, cfg.exec, |q, c| sim.get(q, c))?)
}

/// 1 when query and candidate carry the same nonzero label, else 0; ties
/// fall back to ascending candidate id.
fn label_scores(
    cfg: &ExperimentConfig,
    _data: &Dataset,
    st: &LabelState,
    dir: Direction,
    queries: &[NodeId],
    candidates: &[NodeId],
) -> CliResult<AlignmentRanking> {
    let (lq, lc) = (st.labels(dir.query_side()), st.labels(dir.target_side()));
    Ok(rank_by_score(dir, queries, candidates, cfg.top_n, cfg.exec, |q, c| {
        if lq[q] != 0 && lq[q] == lc[c] {
            1.0
        } else {
            0.0
        }
    })?)
}
