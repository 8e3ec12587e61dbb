//! Graphs over dense node ids, edge-list ingestion, synthetic generation and
//! anchor sampling.

mod anchors;
mod generate;
mod io;

pub use anchors::{sample_anchors, AnchorSet};
pub use generate::{generate_er, perturb, PerturbationRecord};
pub(crate) use io::create as io_create;
pub use io::{load_edge_list, parse_edge_list, read_pair_file, write_edge_list, IdMap, LoadedGraph};

use serde::{Deserialize, Serialize};

pub type NodeId = usize;

/// Compressed-sparse-row adjacency with both directions materialised.
///
/// Neighbour lists are sorted and free of duplicates and self-loops. A graph
/// that is `symmetric` holds `(j, i)` for every `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_targets: Vec<NodeId>,
    symmetric: bool,
}

impl Graph {
    /// Builds a graph from arcs. Self-loops and duplicates are dropped. When
    /// `directed` is false every arc is mirrored.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>, directed: bool) -> Self {
        let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
        for (i, j) in edges {
            assert!(i < n && j < n, "edge ({i}, {j}) out of range for n={n}");
            if i == j {
                continue;
            }
            arcs.push((i, j));
            if !directed {
                arcs.push((j, i));
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        let symmetric = !directed || is_symmetric_sorted(&arcs);
        Self::from_sorted_arcs(n, &arcs, symmetric)
    }

    fn from_sorted_arcs(n: usize, arcs: &[(NodeId, NodeId)], symmetric: bool) -> Self {
        let (out_offsets, out_targets) = csr(n, arcs.iter().copied());
        let mut rev: Vec<(NodeId, NodeId)> = arcs.iter().map(|&(i, j)| (j, i)).collect();
        rev.sort_unstable();
        let (in_offsets, in_targets) = csr(n, rev.into_iter());
        Graph {
            n,
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            symmetric,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_arcs(n, &[], true)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of arcs (a bi-directed edge counts twice).
    pub fn arc_count(&self) -> usize {
        self.out_targets.len()
    }

    /// Number of unordered edges; only meaningful for symmetric graphs.
    pub fn undirected_edge_count(&self) -> usize {
        self.out_targets.len() / 2
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn out_neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.out_targets[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    pub fn in_neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.in_targets[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    pub fn out_degree(&self, i: NodeId) -> usize {
        self.out_offsets[i + 1] - self.out_offsets[i]
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.out_neighbors(i).binary_search(&j).is_ok()
    }

    /// All arcs in `(source, target)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n).flat_map(move |i| self.out_neighbors(i).iter().map(move |&j| (i, j)))
    }

    /// Unordered edges `(i, j)` with `i < j`, for symmetric graphs.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.arcs().filter(|&(i, j)| i < j)
    }

    /// Symmetric closure; node count unchanged.
    pub fn to_bidirected(&self) -> Graph {
        if self.symmetric {
            return self.clone();
        }
        Graph::from_edges(self.n, self.arcs(), false)
    }
}

fn csr(n: usize, arcs: impl Iterator<Item = (NodeId, NodeId)>) -> (Vec<usize>, Vec<NodeId>) {
    let mut offsets = vec![0usize; n + 1];
    let mut targets = Vec::new();
    for (i, j) in arcs {
        offsets[i + 1] += 1;
        targets.push(j);
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    (offsets, targets)
}

fn is_symmetric_sorted(arcs: &[(NodeId, NodeId)]) -> bool {
    arcs.iter().all(|&(i, j)| arcs.binary_search(&(j, i)).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bidirected_closure() {
        let g = Graph::from_edges(2, [(0, 1)], true);
        assert!(!g.is_symmetric());
        let b = g.to_bidirected();
        assert_eq!(b.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(b.node_count(), 2);
        assert_eq!(b.to_bidirected(), b);

        let e = Graph::empty(0);
        assert_eq!(e.to_bidirected().arc_count(), 0);
    }

    #[test]
    fn directed_input_that_happens_to_be_symmetric() {
        let g = Graph::from_edges(2, [(0, 1), (1, 0)], true);
        assert!(g.is_symmetric());
        assert_eq!(g.to_bidirected(), g);
    }

    proptest! {
        #[test]
        fn in_adjacency_is_transpose(n in 1usize..30, raw in proptest::collection::vec((0usize..30, 0usize..30), 0..120), directed: bool) {
            let edges: Vec<_> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let g = Graph::from_edges(n, edges.clone(), directed);
            let mut fwd: Vec<_> = g.arcs().collect();
            let mut back: Vec<_> = (0..n).flat_map(|j| g.in_neighbors(j).iter().map(move |&i| (i, j))).collect();
            fwd.sort_unstable();
            back.sort_unstable();
            prop_assert_eq!(&fwd, &back);
            for i in 0..n {
                prop_assert!(g.out_neighbors(i).windows(2).all(|w| w[0] < w[1]));
                prop_assert!(!g.out_neighbors(i).contains(&i));
            }
            let b = g.to_bidirected();
            for (i, j) in b.arcs() {
                prop_assert!(b.has_edge(j, i));
            }
            for (i, j) in edges {
                if i != j {
                    prop_assert!(g.has_edge(i, j));
                    prop_assert!(b.has_edge(i, j) && b.has_edge(j, i));
                }
            }
        }
    }
}
