use std::sync::atomic::{AtomicBool, Ordering};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::relabel::{Label, LabelState, Side};

const MAX_REJECTIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegativeSampling {
    Uniform,
    /// Degree raised to the given power (0.75 in word2vec).
    Unigram(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub k_label: usize,
    pub k_context: usize,
    pub batch_size: usize,
    pub negatives: NegativeSampling,
    /// When false no label pairs are drawn at all.
    pub use_labels: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelPair {
    pub s: NodeId,
    pub t: NodeId,
    pub positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContextPair {
    pub side: Side,
    pub i: NodeId,
    pub j: NodeId,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingBatch {
    pub index: usize,
    pub seed: u64,
    pub label_pairs: Vec<LabelPair>,
    pub context_pairs: Vec<ContextPair>,
}

struct ArcTable<'a> {
    graph: &'a Graph,
    sources: Vec<NodeId>,
    targets: Vec<NodeId>,
    noise: Option<WeightedIndex<f64>>,
}

impl<'a> ArcTable<'a> {
    fn new(graph: &'a Graph, negatives: NegativeSampling) -> Self {
        let (sources, targets) = graph.arcs().unzip();
        let noise = match negatives {
            NegativeSampling::Uniform => None,
            NegativeSampling::Unigram(power) => {
                WeightedIndex::new((0..graph.node_count()).map(|i| (graph.out_degree(i) as f64).powf(power))).ok()
            }
        };
        ArcTable {
            graph,
            sources,
            targets,
            noise,
        }
    }

    fn noise_node(&self, rng: &mut ChaCha8Rng) -> NodeId {
        match &self.noise {
            Some(w) => w.sample(rng),
            None => rng.random_range(0..self.graph.node_count()),
        }
    }
}

/// Draws the training batch set for one relabeling state. Batch `k` is a
/// pure function of `(seed, k)`, so the same set can be replayed every epoch
/// without being stored.
pub struct BatchSampler<'a> {
    config: SamplerConfig,
    seed: u64,
    arcs: [ArcTable<'a>; 2],
    labels_t: &'a [Label],
    /// per shared label: (source nodes, target nodes)
    groups: Vec<(Vec<NodeId>, Vec<NodeId>)>,
    group_pick: Option<WeightedIndex<f64>>,
    warned: AtomicBool,
}

impl<'a> BatchSampler<'a> {
    pub fn new(g_s: &'a Graph, g_t: &'a Graph, state: &'a LabelState, config: SamplerConfig, seed: u64) -> Self {
        let mut by_label: Vec<(Vec<NodeId>, Vec<NodeId>)> = vec![Default::default(); state.label_count + 1];
        for (i, &l) in state.labels_s.iter().enumerate() {
            by_label[l].0.push(i);
        }
        for (j, &l) in state.labels_t.iter().enumerate() {
            by_label[l].1.push(j);
        }
        let groups: Vec<_> = by_label
            .into_iter()
            .skip(1)
            .filter(|(s, t)| !s.is_empty() && !t.is_empty())
            .collect();
        let group_pick = if config.use_labels && !groups.is_empty() {
            WeightedIndex::new(groups.iter().map(|(s, t)| s.len() as f64 * t.len() as f64)).ok()
        } else {
            None
        };
        BatchSampler {
            config,
            seed,
            arcs: [ArcTable::new(g_s, config.negatives), ArcTable::new(g_t, config.negatives)],
            labels_t: &state.labels_t,
            groups,
            group_pick,
            warned: AtomicBool::new(false),
        }
    }

    /// Number of cross-network pairs sharing a nonzero label.
    pub fn positive_label_pairs(&self) -> usize {
        self.groups.iter().map(|(s, t)| s.len() * t.len()).sum()
    }

    pub fn batch(&self, index: usize) -> TrainingBatch {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let cfg = &self.config;
        let mut label_pairs = Vec::new();
        match &self.group_pick {
            Some(pick) => {
                label_pairs.reserve(cfg.batch_size * (1 + cfg.k_label));
                for _ in 0..cfg.batch_size {
                    let (ss, ts) = &self.groups[pick.sample(&mut rng)];
                    let s = ss[rng.random_range(0..ss.len())];
                    let t = ts[rng.random_range(0..ts.len())];
                    label_pairs.push(LabelPair { s, t, positive: true });
                    let own = self.labels_t[t];
                    for _ in 0..cfg.k_label {
                        if let Some(neg) = self.reject(&mut rng, |r| r.random_range(0..self.labels_t.len()), |c| self.labels_t[c] != own) {
                            label_pairs.push(LabelPair { s, t: neg, positive: false });
                        }
                    }
                }
            }
            None => {
                if cfg.use_labels && !self.warned.swap(true, Ordering::Relaxed) {
                    log::warn!("no cross-network pairs share a label; batches carry context pairs only");
                }
            }
        }

        let mut context_pairs = Vec::with_capacity(2 * cfg.batch_size * (1 + cfg.k_context));
        for (side, table) in [Side::Source, Side::Target].into_iter().zip(&self.arcs) {
            if table.sources.is_empty() {
                continue;
            }
            for _ in 0..cfg.batch_size {
                let k = rng.random_range(0..table.sources.len());
                let (i, j) = (table.sources[k], table.targets[k]);
                context_pairs.push(ContextPair { side, i, j, positive: true });
                for _ in 0..cfg.k_context {
                    if let Some(neg) = self.reject(&mut rng, |r| table.noise_node(r), |c| c != i && !table.graph.has_edge(i, c)) {
                        context_pairs.push(ContextPair { side, i, j: neg, positive: false });
                    }
                }
            }
        }

        TrainingBatch {
            index,
            seed: self.seed,
            label_pairs,
            context_pairs,
        }
    }

    fn reject(
        &self,
        rng: &mut ChaCha8Rng,
        mut draw: impl FnMut(&mut ChaCha8Rng) -> NodeId,
        ok: impl Fn(NodeId) -> bool,
    ) -> Option<NodeId> {
        (0..MAX_REJECTIONS).map(|_| draw(rng)).find(|&c| ok(c))
    }
}
