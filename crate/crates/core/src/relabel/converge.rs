use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::hard::{hard_relabel_round, HashRuleTable};
use super::soft::soft_relabel_round;
use super::state::{init_labels, LabelState, Side};
use crate::exec::Exec;
use crate::graph::{AnchorSet, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelabelMode {
    Soft,
    Hard,
}

impl std::str::FromStr for RelabelMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "soft" => Ok(RelabelMode::Soft),
            "hard" => Ok(RelabelMode::Hard),
            _ => Err(format!("unknown relabel mode {s:?} (expected soft or hard)")),
        }
    }
}

impl std::fmt::Display for RelabelMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RelabelMode::Soft => "soft",
            RelabelMode::Hard => "hard",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    /// Growth of the compressed label set in this round.
    pub new_labels: usize,
    /// Nodes (both sides) that went from 0 to a label in this round.
    pub newly_labeled: usize,
    pub label_count: usize,
    pub elapsed_secs: f64,
}

#[derive(Debug, Clone)]
pub struct RelabelOutcome {
    pub state: LabelState,
    pub rounds: usize,
    pub converged: bool,
    pub trace: Vec<RoundTrace>,
}

/// Round driver that owns the hash rules for hard mode, so callers that
/// interleave relabeling with other work keep consistent hashing.
#[derive(Debug, Clone)]
pub struct Relabeler {
    mode: RelabelMode,
    rules: HashRuleTable,
    exec: Exec,
    rounds: usize,
}

impl Relabeler {
    pub fn new(mode: RelabelMode, exec: Exec) -> Self {
        Relabeler {
            mode,
            rules: HashRuleTable::new(),
            exec,
            rounds: 0,
        }
    }

    pub fn mode(&self) -> RelabelMode {
        self.mode
    }

    /// Runs one round and reports what changed.
    pub fn step(&mut self, g_s: &Graph, g_t: &Graph, state: &LabelState) -> (LabelState, RoundTrace) {
        let start = Instant::now();
        let next = match self.mode {
            RelabelMode::Soft => soft_relabel_round(g_s, g_t, state, self.exec),
            RelabelMode::Hard => hard_relabel_round(g_s, g_t, state, &mut self.rules),
        };
        self.rounds += 1;
        let labeled = |st: &LabelState| st.labeled_count(Side::Source) + st.labeled_count(Side::Target);
        let trace = RoundTrace {
            round: self.rounds,
            new_labels: next.label_count - state.label_count,
            newly_labeled: labeled(&next) - labeled(state),
            label_count: next.label_count,
            elapsed_secs: start.elapsed().as_secs_f64(),
        };
        log::debug!(
            "relabel round {}: +{} labels, +{} nodes, |C|={}",
            trace.round,
            trace.new_labels,
            trace.newly_labeled,
            trace.label_count
        );
        (next, trace)
    }
}

/// Repeats rounds until one labels no new node or `max_rounds` is spent.
pub fn relabel_until_convergence(
    g_s: &Graph,
    g_t: &Graph,
    anchors: &AnchorSet,
    mode: RelabelMode,
    max_rounds: usize,
    exec: Exec,
) -> RelabelOutcome {
    let mut state = init_labels(anchors, g_s.node_count(), g_t.node_count());
    let mut relabeler = Relabeler::new(mode, exec);
    let mut trace = Vec::new();
    let mut converged = false;
    while trace.len() < max_rounds.max(1) {
        let (next, t) = relabeler.step(g_s, g_t, &state);
        state = next;
        let done = t.newly_labeled == 0;
        trace.push(t);
        if done {
            converged = true;
            break;
        }
    }
    RelabelOutcome {
        state,
        rounds: trace.len(),
        converged,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_anchors_converge_at_once() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)], false);
        for mode in [RelabelMode::Soft, RelabelMode::Hard] {
            let out = relabel_until_convergence(&g, &g, &AnchorSet::default(), mode, 10, Exec::Sequential);
            assert!(out.converged);
            assert_eq!(out.rounds, 1);
            assert_eq!(out.state.label_count, 0);
        }
    }

    #[test]
    fn full_anchor_set_has_nothing_to_do() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)], false);
        let a = AnchorSet::new((0..4).map(|i| (i, i)).collect(), 4, 4).unwrap();
        let out = relabel_until_convergence(&g, &g, &a, RelabelMode::Soft, 10, Exec::Sequential);
        assert_eq!((out.rounds, out.converged, out.state.label_count), (1, true, 4));
    }

    #[test]
    fn max_rounds_caps_execution() {
        let g = Graph::from_edges(6, (0..5).map(|i| (i, i + 1)), false);
        let a = AnchorSet::new(vec![(0, 0)], 6, 6).unwrap();
        let out = relabel_until_convergence(&g, &g, &a, RelabelMode::Soft, 1, Exec::Sequential);
        assert_eq!(out.rounds, 1);
        assert!(!out.converged);
        let out = relabel_until_convergence(&g, &g, &a, RelabelMode::Soft, 100, Exec::Sequential);
        assert!(out.converged);
        assert_eq!(out.state.labels_s, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(out.state.labels_t, out.state.labels_s);
        assert_eq!(out.rounds, 6);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("soft".parse::<RelabelMode>().unwrap(), RelabelMode::Soft);
        assert_eq!(RelabelMode::Hard.to_string(), "hard");
        assert!("fuzzy".parse::<RelabelMode>().is_err());
    }
}
