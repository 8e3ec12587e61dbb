use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::embed::{EmbeddingStore, Table};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{AnchorSet, NodeId};
use crate::relabel::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    SourceToTarget,
    TargetToSource,
}

impl Direction {
    pub fn query_side(self) -> Side {
        match self {
            Direction::SourceToTarget => Side::Source,
            Direction::TargetToSource => Side::Target,
        }
    }

    pub fn target_side(self) -> Side {
        match self {
            Direction::SourceToTarget => Side::Target,
            Direction::TargetToSource => Side::Source,
        }
    }
}

/// Top candidates per query, best first; ties go to the smaller node id.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentRanking {
    pub direction: Direction,
    lists: Vec<(NodeId, Vec<(NodeId, f64)>)>,
}

impl AlignmentRanking {
    pub fn list(&self, query: NodeId) -> Option<&[(NodeId, f64)]> {
        self.lists
            .binary_search_by_key(&query, |l| l.0)
            .ok()
            .map(|k| self.lists[k].1.as_slice())
    }

    /// 0-based position of `candidate` in the list of `query`.
    pub fn rank_of(&self, query: NodeId, candidate: NodeId) -> Option<usize> {
        self.list(query)?.iter().position(|&(c, _)| c == candidate)
    }

    pub fn queries(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.lists.iter().map(|l| l.0)
    }

    pub fn lists(&self) -> &[(NodeId, Vec<(NodeId, f64)>)] {
        &self.lists
    }
}

/// Target-side nodes that are not members of a training anchor.
pub fn candidate_pool(n_target: usize, anchors: &AnchorSet, direction: Direction) -> Vec<NodeId> {
    let mut used = vec![false; n_target];
    for &(s, t) in anchors.pairs() {
        used[if direction == Direction::SourceToTarget { t } else { s }] = true;
    }
    (0..n_target).filter(|&c| !used[c]).collect()
}

fn by_score_then_id(a: &(NodeId, f64), b: &(NodeId, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then(a.0.cmp(&b.0))
}

/// Exact top-`top_k` of `candidates` for every query under `score`.
pub fn rank_by_score<F>(
    direction: Direction,
    queries: &[NodeId],
    candidates: &[NodeId],
    top_k: usize,
    exec: Exec,
    score: F,
) -> Result<AlignmentRanking>
where
    F: Fn(NodeId, NodeId) -> f64 + Sync + Send,
{
    if queries.is_empty() {
        return Err(Error::Empty("query set"));
    }
    if top_k == 0 {
        return Err(Error::InvalidArgument("top_k must be >= 1".into()));
    }
    let mut queries = queries.to_vec();
    queries.sort_unstable();
    queries.dedup();
    let lists = exec.map_slice(&queries, |&q| {
        let mut scored: Vec<(NodeId, f64)> = candidates.iter().map(|&c| (c, score(q, c))).collect();
        if top_k < scored.len() {
            scored.select_nth_unstable_by(top_k - 1, by_score_then_id);
            scored.truncate(top_k);
        }
        scored.sort_unstable_by(by_score_then_id);
        (q, scored)
    });
    Ok(AlignmentRanking { direction, lists })
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        vec![0.0; v.len()]
    } else {
        v.iter().map(|x| x / n).collect()
    }
}

/// Ranks `candidates` for each query by cosine similarity of node vectors.
pub fn rank_candidates(
    store: &EmbeddingStore,
    queries: &[NodeId],
    candidates: &[NodeId],
    direction: Direction,
    top_k: usize,
    exec: Exec,
) -> Result<AlignmentRanking> {
    let (qs, ts) = (direction.query_side(), direction.target_side());
    let mut target_unit = vec![Vec::new(); store.node_count(ts)];
    for &c in candidates {
        target_unit[c] = normalized(store.vector(Table::Node, ts, c));
    }
    let mut query_unit = vec![Vec::new(); store.node_count(qs)];
    for &q in queries {
        query_unit[q] = normalized(store.vector(Table::Node, qs, q));
    }
    rank_by_score(direction, queries, candidates, top_k, exec, |q, c| {
        query_unit[q].iter().zip(&target_unit[c]).map(|(a, b)| a * b).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::EmbeddingStore;
    use proptest::prelude::*;

    #[test]
    fn two_candidates() {
        let r = rank_by_score(Direction::SourceToTarget, &[0], &[0, 1], 2, Exec::Sequential, |_, c| [0.2, 0.9][c]).unwrap();
        assert_eq!(r.list(0).unwrap(), &[(1, 0.9), (0, 0.2)]);
        assert_eq!(r.rank_of(0, 0), Some(1));
    }

    #[test]
    fn ties_by_id_and_errors() {
        let r = rank_by_score(Direction::TargetToSource, &[3], &[5, 2, 9], 3, Exec::Sequential, |_, _| 0.5).unwrap();
        assert_eq!(r.list(3).unwrap().iter().map(|e| e.0).collect::<Vec<_>>(), vec![2, 5, 9]);
        assert!(rank_by_score(Direction::SourceToTarget, &[], &[1], 1, Exec::Sequential, |_, _| 0.0).is_err());
        assert!(rank_by_score(Direction::SourceToTarget, &[0], &[1], 0, Exec::Sequential, |_, _| 0.0).is_err());
    }

    #[test]
    fn anchors_excluded_from_pool() {
        let a = AnchorSet::new(vec![(0, 3), (2, 1)], 4, 5).unwrap();
        assert_eq!(candidate_pool(5, &a, Direction::SourceToTarget), vec![0, 2, 4]);
        assert_eq!(candidate_pool(4, &a, Direction::TargetToSource), vec![1, 3]);
    }

    #[test]
    fn aliased_anchor_scores_one() {
        let a = AnchorSet::new(vec![(1, 1)], 3, 3).unwrap();
        let st = EmbeddingStore::new(3, 3, &a, true, 16, 2).unwrap();
        let r = rank_candidates(&st, &[1], &[0, 1, 2], Direction::SourceToTarget, 3, Exec::Sequential).unwrap();
        assert_eq!(r.list(1).unwrap()[0].0, 1);
        assert!((r.list(1).unwrap()[0].1 - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn matches_brute_force(n_s in 1usize..25, n_t in 1usize..25, d in 1usize..8, seed: u64, k in 1usize..30) {
            let st = EmbeddingStore::new(n_s, n_t, &AnchorSet::default(), true, d, seed).unwrap();
            let queries: Vec<_> = (0..n_s).collect();
            let cands: Vec<_> = (0..n_t).collect();
            let r = rank_candidates(&st, &queries, &cands, Direction::SourceToTarget, k, Exec::Parallel).unwrap();
            for q in 0..n_s {
                let a = st.vector(Table::Node, Side::Source, q);
                let mut full: Vec<(NodeId, f64)> = (0..n_t).map(|c| {
                    let b = st.vector(Table::Node, Side::Target, c);
                    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
                    (c, dot / (na * nb))
                }).collect();
                full.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));
                full.truncate(k);
                let got = r.list(q).unwrap();
                prop_assert_eq!(got.len(), full.len());
                for (g, f) in got.iter().zip(&full) {
                    prop_assert!((g.1 - f.1).abs() < 1e-9);
                }
                prop_assert!(got.windows(2).all(|w| w[0].1 >= w[1].1));
            }
        }
    }
}
