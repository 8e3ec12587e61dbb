use super::state::Label;
use crate::exec::Exec;
use crate::graph::{Graph, NodeId};

/// Sparse label histogram: `(label, count)` sorted by label, counts > 0.
pub type TupleRow = Vec<(Label, u32)>;

/// Row `i` of `(A + I) * WL`: how often each label occurs among node `i` and
/// its out-neighbours. Column `c - 1` holds label `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleMatrix {
    pub(crate) rows: Vec<TupleRow>,
    pub(crate) width: usize,
}

impl TupleMatrix {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[(Label, u32)] {
        &self.rows[i]
    }

    pub fn dense_row(&self, i: usize) -> Vec<u32> {
        let mut out = vec![0; self.width];
        for &(l, c) in &self.rows[i] {
            out[l - 1] = c;
        }
        out
    }
}

pub(crate) fn tuple_row(g: &Graph, labels: &[Label], i: NodeId) -> TupleRow {
    let mut hits: Vec<Label> = std::iter::once(i)
        .chain(g.out_neighbors(i).iter().copied())
        .map(|j| labels[j])
        .filter(|&l| l != 0)
        .collect();
    hits.sort_unstable();
    let mut row: TupleRow = Vec::with_capacity(hits.len());
    for l in hits {
        match row.last_mut() {
            Some((last, c)) if *last == l => *c += 1,
            _ => row.push((l, 1)),
        }
    }
    row
}

/// Sparse `(A + I) * WL` over every node of `g`.
pub fn propagate(g: &Graph, labels: &[Label], label_count: usize, exec: Exec) -> TupleMatrix {
    debug_assert_eq!(labels.len(), g.node_count());
    debug_assert!(labels.iter().all(|&l| l <= label_count));
    let rows = exec.map_range(g.node_count(), |i| tuple_row(g, labels, i));
    TupleMatrix { rows, width: label_count }
}

/// Tuple rows for a subset of nodes, in the order given.
pub fn propagate_nodes(g: &Graph, labels: &[Label], label_count: usize, nodes: &[NodeId], exec: Exec) -> TupleMatrix {
    let rows = exec.map_slice(nodes, |&i| tuple_row(g, labels, i));
    TupleMatrix { rows, width: label_count }
}
