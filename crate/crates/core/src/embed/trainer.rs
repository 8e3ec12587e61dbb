use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use super::grad::GradAccumulator;
use super::objective::{accumulate_context, accumulate_label};
use super::sampler::{BatchSampler, NegativeSampling, SamplerConfig, TrainingBatch};
use super::store::EmbeddingStore;
use crate::error::Result;
use crate::exec::Exec;
use crate::graph::{AnchorSet, Graph};
use crate::relabel::{init_labels, relabel_until_convergence, LabelState, RelabelMode, Relabeler, RoundTrace};

/// Entries per gradient chunk. Fixed so that parallel and sequential
/// accumulation sum in the same order.
const GRAD_CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// One relabel round, then `epochs` passes over a fresh batch set, repeated.
    Interleaved,
    /// Relabel to convergence first, then a fixed number of epochs.
    Fcl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub dim: usize,
    pub adam: AdamConfig,
    pub k_label: usize,
    pub k_context: usize,
    pub batch_size: usize,
    /// Batches in the set drawn after each relabel round; `None` covers the
    /// larger arc set once.
    pub batches_per_round: Option<usize>,
    /// Passes over the batch set per round (interleaved schedule).
    pub epochs: usize,
    pub schedule: Schedule,
    /// Outer rounds for the interleaved schedule.
    pub max_rounds: usize,
    /// Epoch budget after relabel convergence (FCL schedule).
    pub fcl_epochs: usize,
    pub max_relabel_rounds: usize,
    pub plateau_tol: f64,
    pub plateau_window: usize,
    pub relabel_mode: RelabelMode,
    /// Off for the context-only ablation.
    pub use_label_loss: bool,
    pub share_anchors: bool,
    pub negatives: NegativeSampling,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 128,
            adam: AdamConfig::default(),
            k_label: 1,
            k_context: 20,
            batch_size: 1000,
            batches_per_round: None,
            epochs: 50,
            schedule: Schedule::Interleaved,
            max_rounds: 100,
            fcl_epochs: 3000,
            max_relabel_rounds: 1000,
            plateau_tol: 1e-3,
            plateau_window: 10,
            relabel_mode: RelabelMode::Soft,
            use_label_loss: true,
            share_anchors: true,
            negatives: NegativeSampling::Uniform,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub round: usize,
    pub epoch: usize,
    pub label_count: usize,
    /// Mean label objective per batch; `None` when the label term is off.
    pub label_objective: Option<f64>,
    pub context_objective: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub store: EmbeddingStore,
    pub state: LabelState,
    pub trace: Vec<TraceRow>,
    pub relabel_trace: Vec<RoundTrace>,
    pub rounds: usize,
    pub labels_converged: bool,
    pub objective_converged: bool,
    pub elapsed_secs: f64,
}

/// Values of the label and context terms over a batch, plus the summed ascent
/// gradient.
pub fn batch_objective(store: &EmbeddingStore, batch: &TrainingBatch, exec: Exec) -> Result<(f64, f64, GradAccumulator)> {
    let d = store.dim();
    let label_chunks = exec.map_chunks(&batch.label_pairs, GRAD_CHUNK, |chunk| -> Result<(f64, GradAccumulator)> {
        let mut acc = GradAccumulator::new(d);
        let mut sum = 0.0;
        for p in chunk {
            sum += accumulate_label(store, p.s, p.t, p.positive, &mut acc)?;
        }
        Ok((sum, acc))
    });
    let context_chunks = exec.map_chunks(&batch.context_pairs, GRAD_CHUNK, |chunk| {
        let mut acc = GradAccumulator::new(d);
        let mut sum = 0.0;
        for c in chunk {
            sum += accumulate_context(store, c.side, c.i, c.j, c.positive, &mut acc);
        }
        (sum, acc)
    });
    let mut total = GradAccumulator::new(d);
    let mut label = 0.0;
    for chunk in label_chunks {
        let (v, acc) = chunk?;
        label += v;
        total.merge(&acc);
    }
    let mut context = 0.0;
    for (v, acc) in context_chunks {
        context += v;
        total.merge(&acc);
    }
    Ok((label, context, total))
}

/// Mixes `tag` into `seed`; used to give each round, split and file its own stream.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Run<'a> {
    g_s: &'a Graph,
    g_t: &'a Graph,
    config: &'a TrainConfig,
    exec: Exec,
    store: EmbeddingStore,
    adam: AdamState,
    trace: Vec<TraceRow>,
    history: Vec<f64>,
}

impl Run<'_> {
    fn batches_per_round(&self) -> usize {
        self.config.batches_per_round.unwrap_or_else(|| {
            let arcs = self.g_s.arc_count().max(self.g_t.arc_count());
            arcs.div_ceil(self.config.batch_size.max(1)).max(1)
        })
    }

    fn epochs(&mut self, state: &LabelState, round: usize, epochs: usize) -> Result<()> {
        let cfg = self.config;
        let sampler_cfg = SamplerConfig {
            k_label: cfg.k_label,
            k_context: cfg.k_context,
            batch_size: cfg.batch_size,
            negatives: cfg.negatives,
            use_labels: cfg.use_label_loss,
        };
        let sampler = BatchSampler::new(self.g_s, self.g_t, state, sampler_cfg, derive_seed(cfg.seed, round as u64));
        let n_batches = self.batches_per_round();
        for _ in 0..epochs {
            let (mut label, mut context) = (0.0, 0.0);
            for k in 0..n_batches {
                let batch = sampler.batch(k);
                let (l, c, grad) = batch_objective(&self.store, &batch, self.exec)?;
                self.adam.ascend(&mut self.store, &grad)?;
                label += l;
                context += c;
            }
            let (label, context) = (label / n_batches as f64, context / n_batches as f64);
            self.history.push(label + context);
            let row = TraceRow {
                round,
                epoch: self.trace.len() + 1,
                label_count: state.label_count,
                label_objective: cfg.use_label_loss.then_some(label),
                context_objective: context,
            };
            log::debug!("round {round} epoch {}: label {label:.4} context {context:.4}", row.epoch);
            self.trace.push(row);
        }
        Ok(())
    }

    fn plateaued(&self) -> bool {
        let w = self.config.plateau_window.max(1);
        let h = &self.history;
        if h.len() <= w {
            return false;
        }
        let (now, then) = (h[h.len() - 1], h[h.len() - 1 - w]);
        (now - then).abs() <= self.config.plateau_tol * then.abs().max(f64::MIN_POSITIVE)
    }
}

/// Learns embeddings for both graphs, regularised by the relabeling labels.
pub fn train(g_s: &Graph, g_t: &Graph, anchors: &AnchorSet, config: &TrainConfig, exec: Exec) -> Result<TrainOutcome> {
    let start = Instant::now();
    let store = EmbeddingStore::new(g_s.node_count(), g_t.node_count(), anchors, config.share_anchors, config.dim, config.seed)?;
    let adam = AdamState::new(config.adam, &store);
    let mut run = Run {
        g_s,
        g_t,
        config,
        exec,
        store,
        adam,
        trace: Vec::new(),
        history: Vec::new(),
    };
    let mut state = init_labels(anchors, g_s.node_count(), g_t.node_count());
    let mut relabel_trace = Vec::new();
    let mut labels_converged = !config.use_label_loss;
    let mut objective_converged = false;
    let mut rounds = 0;

    match config.schedule {
        Schedule::Interleaved => {
            let mut relabeler = Relabeler::new(config.relabel_mode, exec);
            for round in 1..=config.max_rounds {
                rounds = round;
                if !labels_converged {
                    let (next, rt) = relabeler.step(g_s, g_t, &state);
                    labels_converged = rt.newly_labeled == 0;
                    state = next;
                    relabel_trace.push(rt);
                }
                run.epochs(&state, round, config.epochs)?;
                if labels_converged && run.plateaued() {
                    objective_converged = true;
                    break;
                }
            }
        }
        Schedule::Fcl => {
            if config.max_rounds > 0 {
                if config.use_label_loss {
                    let out = relabel_until_convergence(g_s, g_t, anchors, config.relabel_mode, config.max_relabel_rounds, exec);
                    labels_converged = out.converged;
                    state = out.state;
                    relabel_trace = out.trace;
                }
                rounds = 1;
                run.epochs(&state, 1, config.fcl_epochs)?;
                objective_converged = run.plateaued();
            }
        }
    }

    debug_assert!(run.store.all_finite());
    Ok(TrainOutcome {
        store: run.store,
        state,
        trace: run.trace,
        relabel_trace,
        rounds,
        labels_converged,
        objective_converged,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::objective::{context_objective_grad, label_objective_grad};
    use crate::embed::store::Table;
    use crate::graph::generate_er;
    use crate::relabel::Side;

    fn small() -> TrainConfig {
        TrainConfig {
            dim: 8,
            batch_size: 50,
            epochs: 2,
            max_rounds: 3,
            k_context: 3,
            ..Default::default()
        }
    }

    #[test]
    fn zero_rounds_returns_initial_store() {
        let g = generate_er(30, 0.1, 1).unwrap();
        let a = AnchorSet::new(vec![(0, 0)], 30, 30).unwrap();
        let cfg = TrainConfig { max_rounds: 0, ..small() };
        let out = train(&g, &g, &a, &cfg, Exec::Sequential).unwrap();
        let fresh = EmbeddingStore::new(30, 30, &a, true, 8, cfg.seed).unwrap();
        assert_eq!(out.store, fresh);
        assert!(out.trace.is_empty());
        let out = train(&g, &g, &a, &TrainConfig { schedule: Schedule::Fcl, ..cfg }, Exec::Sequential).unwrap();
        assert_eq!(out.store, fresh);
    }

    #[test]
    fn batch_objective_is_sum_of_terms() {
        let g = generate_er(60, 0.1, 2).unwrap();
        let a = AnchorSet::new((0..20).map(|i| (i, i)).collect(), 60, 60).unwrap();
        let st = init_labels(&a, 60, 60);
        let store = EmbeddingStore::new(60, 60, &a, true, 8, 3).unwrap();
        let cfg = SamplerConfig {
            k_label: 1,
            k_context: 5,
            batch_size: 100,
            negatives: NegativeSampling::Uniform,
            use_labels: true,
        };
        let batch = BatchSampler::new(&g, &g, &st, cfg, 4).batch(0);
        let (label, context, _) = batch_objective(&store, &batch, Exec::Parallel).unwrap();
        let label_ref: f64 = batch
            .label_pairs
            .iter()
            .map(|p| label_objective_grad(&store, p.s, p.t, p.positive).unwrap().value)
            .sum();
        let context_ref: f64 = batch
            .context_pairs
            .iter()
            .map(|c| {
                let v = |t, n| store.vector(t, c.side, n);
                context_objective_grad(v(Table::Node, c.i), v(Table::InContext, c.j), v(Table::OutContext, c.i), v(Table::Node, c.j), c.positive).value
            })
            .sum();
        assert!((label + context - (label_ref + context_ref)).abs() < 1e-12);
        assert!((label - label_ref).abs() < 1e-12);
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let g = generate_er(80, 0.08, 5).unwrap();
        let a = AnchorSet::new((0..30).map(|i| (i, i)).collect(), 80, 80).unwrap();
        let cfg = TrainConfig { batch_size: 3000, ..small() };
        let p = train(&g, &g, &a, &cfg, Exec::Parallel).unwrap();
        let s = train(&g, &g, &a, &cfg, Exec::Sequential).unwrap();
        assert_eq!(p.store, s.store);
        assert_eq!(p.trace, s.trace);
    }

    #[test]
    fn anchors_stay_aliased_and_labels_are_exact_with_full_anchors() {
        let g = generate_er(40, 0.1, 6).unwrap();
        let a = AnchorSet::new((0..40).map(|i| (i, i)).collect(), 40, 40).unwrap();
        let out = train(&g, &g, &a, &small(), Exec::Sequential).unwrap();
        for &(s, t) in a.pairs() {
            assert_eq!(out.store.slot(Side::Source, s), out.store.slot(Side::Target, t));
            assert_eq!(label_objective_grad(&out.store, s, t, true).unwrap().value, 1.0);
        }
        // from step zero as well
        let fresh = EmbeddingStore::new(40, 40, &a, true, 8, 0).unwrap();
        assert!(a.pairs().iter().all(|&(s, t)| label_objective_grad(&fresh, s, t, true).unwrap().value == 1.0));
    }

    #[test]
    fn context_only_trace_has_no_label_column() {
        let g = generate_er(40, 0.1, 6).unwrap();
        let a = AnchorSet::new((0..10).map(|i| (i, i)).collect(), 40, 40).unwrap();
        let cfg = TrainConfig { use_label_loss: false, ..small() };
        let out = train(&g, &g, &a, &cfg, Exec::Sequential).unwrap();
        assert!(out.trace.iter().all(|r| r.label_objective.is_none()));
        assert!(out.relabel_trace.is_empty());
    }

    #[test]
    fn fcl_relabels_first() {
        let g = generate_er(40, 0.1, 6).unwrap();
        let a = AnchorSet::new((0..10).map(|i| (i, i)).collect(), 40, 40).unwrap();
        let cfg = TrainConfig {
            schedule: Schedule::Fcl,
            fcl_epochs: 4,
            ..small()
        };
        let out = train(&g, &g, &a, &cfg, Exec::Sequential).unwrap();
        assert!(out.labels_converged);
        assert_eq!(out.trace.len(), 4);
        let final_count = out.state.label_count;
        assert!(out.trace.iter().all(|r| r.label_count == final_count));
    }

    #[test]
    fn positive_pair_ascent_reaches_alignment() {
        let a0 = AnchorSet::default();
        let mut store = EmbeddingStore::new(1, 1, &a0, false, 8, 11).unwrap();
        let mut adam = AdamState::new(AdamConfig { lr: 1e-3, ..Default::default() }, &store);
        let mut prev = label_objective_grad(&store, 0, 0, true).unwrap().value;
        for _ in 0..20_000 {
            let mut acc = GradAccumulator::new(8);
            accumulate_label(&store, 0, 0, true, &mut acc).unwrap();
            adam.ascend(&mut store, &acc).unwrap();
            let now = label_objective_grad(&store, 0, 0, true).unwrap().value;
            if prev > 1.0 - 1e-3 {
                break;
            }
            assert!(now >= prev, "cosine fell from {prev} to {now}");
            prev = now;
        }
        assert!(prev > 1.0 - 1e-3);
    }
}
