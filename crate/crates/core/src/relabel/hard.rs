use std::collections::{HashMap, HashSet};

use super::state::{Label, LabelState};
use crate::graph::{Graph, NodeId};

/// Canonical tuple: own label followed by the sorted nonzero neighbour labels.
/// `None` when the node and all its neighbours are unlabeled.
pub fn canonical_tuple(g: &Graph, labels: &[Label], i: NodeId) -> Option<Vec<Label>> {
    let mut nbrs: Vec<Label> = g.out_neighbors(i).iter().map(|&j| labels[j]).filter(|&l| l != 0).collect();
    if nbrs.is_empty() && labels[i] == 0 {
        return None;
    }
    nbrs.sort_unstable();
    let mut key = Vec::with_capacity(nbrs.len() + 1);
    key.push(labels[i]);
    key.extend(nbrs);
    Some(key)
}

/// Injective map from canonical tuples to compressed labels, shared by both
/// networks and kept across rounds.
#[derive(Debug, Clone, Default)]
pub struct HashRuleTable {
    rules: HashMap<Vec<Label>, Label>,
}

impl HashRuleTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, key: &[Label]) -> Option<Label> {
        self.rules.get(key).copied()
    }

    /// Existing id for `key`, or `*counter + 1` after bumping the counter.
    fn intern(&mut self, key: Vec<Label>, counter: &mut usize) -> Label {
        *self.rules.entry(key).or_insert_with(|| {
            *counter += 1;
            *counter
        })
    }
}

/// One hard round: an unlabeled node is relabeled only when its canonical
/// tuple also occurs among the unlabeled nodes of the other network. Every
/// node carrying such a tuple, on either side, gets the tuple's label.
pub fn hard_relabel_round(g_s: &Graph, g_t: &Graph, state: &LabelState, rules: &mut HashRuleTable) -> LabelState {
    let keys = |g: &Graph, labels: &[Label]| -> Vec<(NodeId, Vec<Label>)> {
        (0..labels.len())
            .filter(|&i| labels[i] == 0)
            .filter_map(|i| canonical_tuple(g, labels, i).map(|k| (i, k)))
            .collect()
    };
    let ks = keys(g_s, &state.labels_s);
    let kt = keys(g_t, &state.labels_t);
    let in_t: HashSet<&[Label]> = kt.iter().map(|(_, k)| k.as_slice()).collect();

    let mut next = state.clone();
    let mut assigned: HashMap<&[Label], Label> = HashMap::new();
    // ids handed out in order of first occurrence over ascending source nodes
    for (i, key) in &ks {
        if !in_t.contains(key.as_slice()) {
            continue;
        }
        let label = match assigned.get(key.as_slice()) {
            Some(&l) => l,
            None => {
                let l = rules.intern(key.clone(), &mut next.label_count);
                assigned.insert(key.as_slice(), l);
                l
            }
        };
        next.labels_s[*i] = label;
    }
    for (j, key) in &kt {
        if let Some(&l) = assigned.get(key.as_slice()) {
            next.labels_t[*j] = l;
        }
    }
    next
}
