use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// G(n, p): every unordered pair is an edge independently with probability
/// `p`. The result is symmetric.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(n, edges, false))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationRecord {
    pub original_n: usize,
    pub added_nodes: Vec<NodeId>,
    pub added_edges: Vec<(NodeId, NodeId)>,
    pub seed: u64,
}

/// Grows an undirected graph by `floor(node_pct * n)` new nodes, each wired
/// to `attach` distinct uniformly chosen nodes already present, followed by
/// `floor(edge_pct * |E|)` new edges between uniform non-adjacent pairs.
/// Existing edges are never removed.
pub fn perturb(
    g: &Graph,
    node_pct: f64,
    edge_pct: f64,
    attach: usize,
    seed: u64,
) -> Result<(Graph, PerturbationRecord)> {
    if !(node_pct >= 0.0 && edge_pct >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "perturbation ratios must be non-negative (nodes {node_pct}, edges {edge_pct})"
        )));
    }
    if !g.is_symmetric() {
        return Err(Error::InvalidArgument("perturb expects an undirected graph".into()));
    }
    let n0 = g.node_count();
    let e0 = g.undirected_edge_count();
    let new_nodes = (node_pct * n0 as f64).floor() as usize;
    let new_edges = (edge_pct * e0 as f64).floor() as usize;
    let mut record = PerturbationRecord {
        original_n: n0,
        seed,
        ..Default::default()
    };
    if new_nodes == 0 && new_edges == 0 {
        return Ok((g.clone(), record));
    }
    if new_nodes > 0 && n0 == 0 {
        return Err(Error::InvalidArgument("cannot attach nodes to an empty graph".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present: HashSet<(NodeId, NodeId)> = g.undirected_edges().collect();

    for k in 0..new_nodes {
        let v = n0 + k;
        record.added_nodes.push(v);
        let want = attach.max(1).min(v);
        let targets = rand::seq::index::sample(&mut rng, v, want);
        let mut targets: Vec<NodeId> = targets.into_iter().collect();
        targets.sort_unstable();
        for u in targets {
            present.insert((u, v));
            record.added_edges.push((u, v));
        }
    }

    let n = n0 + new_nodes;
    let capacity = n * n.saturating_sub(1) / 2 - present.len();
    if new_edges > capacity {
        return Err(Error::EdgeCapacity {
            requested: new_edges,
            available: capacity,
        });
    }
    if new_edges * 2 > capacity {
        // Dense regime: enumerate the complement and sample without replacement.
        let mut free = Vec::with_capacity(capacity);
        for i in 0..n {
            for j in (i + 1)..n {
                if !present.contains(&(i, j)) {
                    free.push((i, j));
                }
            }
        }
        let mut picked: Vec<usize> = rand::seq::index::sample(&mut rng, free.len(), new_edges).into_vec();
        picked.sort_unstable();
        record.added_edges.extend(picked.into_iter().map(|k| free[k]));
    } else {
        let mut added = 0;
        while added < new_edges {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if present.insert(e) {
                record.added_edges.push(e);
                added += 1;
            }
        }
    }

    let edges = g.undirected_edges().chain(record.added_edges.iter().copied());
    Ok((Graph::from_edges(n, edges, false), record))
}
