use std::collections::HashMap;

use super::state::{Label, LabelState, Side};
use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Cosine similarity between the label histograms of the two eval sets.
/// Unlabeled nodes do not contribute. Two empty histograms give 0.
pub fn label_histogram_similarity(state: &LabelState, eval_s: &[NodeId], eval_t: &[NodeId]) -> f64 {
    let hist = |labels: &[Label], nodes: &[NodeId]| {
        let mut h: HashMap<Label, f64> = HashMap::new();
        for &i in nodes {
            if labels[i] != 0 {
                *h.entry(labels[i]).or_default() += 1.0;
            }
        }
        h
    };
    let hs = hist(&state.labels_s, eval_s);
    let ht = hist(&state.labels_t, eval_t);
    let dot: f64 = hs.iter().filter_map(|(l, a)| ht.get(l).map(|b| a * b)).sum();
    let ns: f64 = hs.values().map(|a| a * a).sum();
    let nt: f64 = ht.values().map(|b| b * b).sum();
    if ns == 0.0 || nt == 0.0 {
        return 0.0;
    }
    (dot / (ns * nt).sqrt()).clamp(0.0, 1.0)
}

/// Fraction of `eval_nodes` on `side` holding a nonzero label.
pub fn coverage_ratio(state: &LabelState, eval_nodes: &[NodeId], side: Side) -> Result<f64> {
    if eval_nodes.is_empty() {
        return Err(Error::Empty("evaluation node set"));
    }
    let labels = state.labels(side);
    let hit = eval_nodes.iter().filter(|&&i| labels[i] != 0).count();
    Ok(hit as f64 / eval_nodes.len() as f64)
}
