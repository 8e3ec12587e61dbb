use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ranking::AlignmentRanking;
use crate::exec::Exec;
use crate::graph::{AnchorSet, Graph, NodeId};

pub const RSA_HOPS: usize = 3;

/// Nodes at shortest-path distance exactly `1..=hops` from `src`, following
/// out-arcs. `shells[k]` holds distance `k + 1`.
pub fn bfs_shells(g: &Graph, src: NodeId, hops: usize) -> (Vec<Vec<NodeId>>, HashMap<NodeId, usize>) {
    let mut dist = HashMap::from([(src, 0)]);
    let mut shells: Vec<Vec<NodeId>> = Vec::with_capacity(hops);
    let mut frontier = vec![src];
    for h in 1..=hops {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in g.out_neighbors(u) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(v) {
                    e.insert(h);
                    next.push(v);
                }
            }
        }
        shells.push(next.clone());
        frontier = next;
    }
    (shells, dist)
}

fn rsa_with(g_s: &Graph, g_t: &Graph, (s, t): (NodeId, NodeId), partner: &HashMap<NodeId, NodeId>, lambda: f64) -> f64 {
    let (shells_s, _) = bfs_shells(g_s, s, RSA_HOPS);
    let (shells_t, dist_t) = bfs_shells(g_t, t, RSA_HOPS);
    let mut total = 0.0;
    let mut discount = 1.0;
    for hop in 1..=RSA_HOPS {
        let (ns, nt) = (shells_s[hop - 1].len(), shells_t[hop - 1].len());
        if ns + nt > 0 {
            let shared = shells_s[hop - 1]
                .iter()
                .filter(|a| partner.get(a).and_then(|b| dist_t.get(b)) == Some(&hop))
                .count();
            total += discount * 2.0 * shared as f64 / (ns + nt) as f64;
        }
        discount *= lambda;
    }
    total
}

/// Reachability to shared anchors of a candidate pair: for each hop `i` in
/// 1..=3, `lambda^(i-1) * 2|shared anchors at hop i| / (|shell_i(s)| + |shell_i(t)|)`.
/// An anchor pair is shared at hop `i` when its source member is at distance
/// `i` from `s` and its target member at distance `i` from `t`.
pub fn rsa(g_s: &Graph, g_t: &Graph, pair: (NodeId, NodeId), anchors: &AnchorSet, lambda: f64) -> f64 {
    let partner: HashMap<NodeId, NodeId> = anchors.pairs().iter().copied().collect();
    rsa_with(g_s, g_t, pair, &partner, lambda)
}

pub fn rsa_scores(g_s: &Graph, g_t: &Graph, pairs: &[(NodeId, NodeId)], anchors: &AnchorSet, lambda: f64, exec: Exec) -> Vec<f64> {
    let partner: HashMap<NodeId, NodeId> = anchors.pairs().iter().copied().collect();
    exec.map_slice(pairs, |&p| rsa_with(g_s, g_t, p, &partner, lambda))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsaBucket {
    pub rsa_min: f64,
    pub rsa_max: f64,
    pub size: usize,
    pub precision_at_1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsaReport {
    pub buckets: Vec<RsaBucket>,
    /// Fewer than ten pairs: everything went into one bucket.
    pub single_bucket_fallback: bool,
}

/// Sorts pairs by RSA (ascending) and reports Precision@1 on ten equal
/// buckets; the last bucket absorbs the remainder.
pub fn rsa_bucket_report(
    test_pairs: &[(NodeId, NodeId)],
    scores: &[f64],
    source_to_target: &AlignmentRanking,
    target_to_source: &AlignmentRanking,
) -> RsaReport {
    assert_eq!(test_pairs.len(), scores.len());
    let mut order: Vec<usize> = (0..test_pairs.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));

    let fallback = test_pairs.len() < 10;
    if fallback {
        log::warn!("only {} test pairs; RSA report uses a single bucket", test_pairs.len());
    }
    let n_buckets = if fallback { 1 } else { 10 };
    let base = test_pairs.len() / n_buckets;
    let hit = |r: &AlignmentRanking, q, c| r.rank_of(q, c) == Some(0);

    let buckets = (0..n_buckets)
        .filter_map(|b| {
            let lo = b * base;
            let hi = if b + 1 == n_buckets { test_pairs.len() } else { lo + base };
            let idx = &order[lo..hi];
            if idx.is_empty() {
                return None;
            }
            let hits: usize = idx
                .iter()
                .map(|&k| {
                    let (s, t) = test_pairs[k];
                    hit(source_to_target, s, t) as usize + hit(target_to_source, t, s) as usize
                })
                .sum();
            Some(RsaBucket {
                rsa_min: scores[idx[0]],
                rsa_max: scores[idx[idx.len() - 1]],
                size: idx.len(),
                precision_at_1: hits as f64 / (2 * idx.len()) as f64,
            })
        })
        .collect();
    RsaReport {
        buckets,
        single_bucket_fallback: fallback,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{rank_by_score, Direction};
    use std::collections::HashSet;

    #[test]
    fn isolated_pair_is_zero() {
        let g = Graph::empty(3);
        let a = AnchorSet::new(vec![(1, 1)], 3, 3).unwrap();
        assert_eq!(rsa(&g, &g, (0, 0), &a, 0.5), 0.0);
    }

    #[test]
    fn one_shared_anchor_at_one_hop() {
        // s: 0 - {1, 2}, t: 0 - {1, 2}; anchor (1, 1) only
        let g = Graph::from_edges(3, [(0, 1), (0, 2)], false);
        let a = AnchorSet::new(vec![(1, 1)], 3, 3).unwrap();
        // hop 2 shells: {} on both sides since 1 and 2 only reach 0
        assert_eq!(rsa(&g, &g, (0, 0), &a, 0.5), 0.5);
    }

    #[test]
    fn maximum_is_one_point_seven_five() {
        // path 0-1-2-3 on both sides, all of 1..3 anchored to themselves
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)], false);
        let a = AnchorSet::new(vec![(1, 1), (2, 2), (3, 3)], 4, 4).unwrap();
        assert_eq!(rsa(&g, &g, (0, 0), &a, 0.5), 1.75);
    }

    #[test]
    fn shells_are_exact_distance() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3)], false);
        let (shells, _) = bfs_shells(&g, 0, 3);
        let sets: Vec<HashSet<_>> = shells.into_iter().map(|s| s.into_iter().collect()).collect();
        assert_eq!(sets[0], HashSet::from([1, 2]));
        assert_eq!(sets[1], HashSet::from([3]));
        assert!(sets[2].is_empty());
    }

    fn rankings(n: usize, correct: impl Fn(usize) -> bool + Sync) -> (AlignmentRanking, AlignmentRanking) {
        let q: Vec<_> = (0..n).collect();
        let score = |a: usize, b: usize| if (a == b) == correct(a) { 1.0 } else { 0.0 };
        (
            rank_by_score(Direction::SourceToTarget, &q, &q, 1, Exec::Sequential, score).unwrap(),
            rank_by_score(Direction::TargetToSource, &q, &q, 1, Exec::Sequential, score).unwrap(),
        )
    }

    #[test]
    fn bucket_sizes() {
        let pairs: Vec<_> = (0..103).map(|i| (i, i)).collect();
        let scores: Vec<f64> = (0..103).map(|i| (i % 17) as f64).collect();
        let (f, b) = rankings(103, |_| true);
        let rep = rsa_bucket_report(&pairs, &scores, &f, &b);
        let sizes: Vec<_> = rep.buckets.iter().map(|b| b.size).collect();
        assert_eq!(sizes, [10, 10, 10, 10, 10, 10, 10, 10, 10, 13]);
        assert!(rep.buckets.iter().all(|b| b.precision_at_1 == 1.0));
        assert!(rep.buckets.windows(2).all(|w| w[0].rsa_max <= w[1].rsa_min));

        let pairs: Vec<_> = (0..100).map(|i| (i, i)).collect();
        let (f, b) = rankings(100, |i| i % 2 == 0);
        let rep = rsa_bucket_report(&pairs, &vec![0.0; 100], &f, &b);
        assert!(rep.buckets.iter().all(|b| b.size == 10 && b.precision_at_1 == 0.5));
    }

    #[test]
    fn small_sets_fall_back() {
        let pairs = [(0, 0), (1, 1), (2, 2)];
        let (f, b) = rankings(3, |_| true);
        let rep = rsa_bucket_report(&pairs, &[0.1, 0.2, 0.3], &f, &b);
        assert!(rep.single_bucket_fallback);
        assert_eq!(rep.buckets.len(), 1);
        assert_eq!(rep.buckets[0].size, 3);
    }

    fn floyd(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.node_count();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
            for &j in g.out_neighbors(i) {
                row[j] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        d
    }

    proptest::proptest! {
        #[test]
        fn matches_distance_oracle(
            es in proptest::collection::vec((0usize..9, 0usize..9), 0..25),
            et in proptest::collection::vec((0usize..9, 0usize..9), 0..25),
            s in 0usize..9, t in 0usize..9,
            lambda in 0.1f64..1.0,
        ) {
            let g_s = Graph::from_edges(9, es, false);
            let g_t = Graph::from_edges(9, et, false);
            let pairs: Vec<_> = (0..9).filter(|&v| v % 2 == 1).map(|v| (v, 8 - v)).collect();
            let a = AnchorSet::new(pairs.clone(), 9, 9).unwrap();
            let (ds, dt) = (floyd(&g_s), floyd(&g_t));
            let mut expect = 0.0;
            for h in 1..=3usize {
                let ns = (0..9).filter(|&v| ds[s][v] == h).count();
                let nt = (0..9).filter(|&v| dt[t][v] == h).count();
                let shared = pairs.iter().filter(|&&(x, y)| ds[s][x] == h && dt[t][y] == h).count();
                if ns + nt > 0 {
                    expect += lambda.powi(h as i32 - 1) * 2.0 * shared as f64 / (ns + nt) as f64;
                }
            }
            let got = rsa(&g_s, &g_t, (s, t), &a, lambda);
            proptest::prop_assert!((got - expect).abs() < 1e-12);
            proptest::prop_assert!((0.0..=1.0 + lambda + lambda * lambda + 1e-12).contains(&got));
        }
    }
}
