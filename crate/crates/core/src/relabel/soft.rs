use super::matching::mutual_match;
use super::similarity::cross_similarity_among;
use super::state::LabelState;
use super::tuple::propagate_nodes;
use crate::exec::Exec;
use crate::graph::{Graph, NodeId};

/// One soft round: unlabeled nodes on each side are compared by the cosine of
/// their tuples, and every mutual best pair receives a fresh shared label.
pub fn soft_relabel_round(g_s: &Graph, g_t: &Graph, state: &LabelState, exec: Exec) -> LabelState {
    let unlabeled = |labels: &[usize]| -> Vec<NodeId> { (0..labels.len()).filter(|&i| labels[i] == 0).collect() };
    let s_ids = unlabeled(&state.labels_s);
    let t_ids = unlabeled(&state.labels_t);
    let tp_s = propagate_nodes(g_s, &state.labels_s, state.label_count, &s_ids, exec);
    let tp_t = propagate_nodes(g_t, &state.labels_t, state.label_count, &t_ids, exec);
    let sim = cross_similarity_among(&tp_s, &s_ids, &tp_t, &t_ids, exec).expect("tuple widths agree within a round");

    let mut next = state.clone();
    for (s, t) in mutual_match(&sim) {
        next.label_count += 1;
        next.labels_s[s] = next.label_count;
        next.labels_t[t] = next.label_count;
    }
    next
}
