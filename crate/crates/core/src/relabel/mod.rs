//! Anchor-seeded Weisfeiler-Lehman relabeling across a pair of networks.
//!
//! Anchors start with unique labels, every other node with label 0. Each
//! round builds the tuple matrix `(A + I) * WL` for both graphs and hands new
//! shared labels to unlabeled nodes, either by mutual best cosine match of
//! tuples (soft) or by identical canonical tuples (hard). Labels, once given,
//! are permanent, so the label count grows monotonically to a fixpoint.

mod converge;
mod hard;
mod matching;
mod quality;
mod similarity;
mod soft;
mod state;
mod tuple;

pub use converge::{relabel_until_convergence, Relabeler, RelabelMode, RelabelOutcome, RoundTrace};
pub use hard::{canonical_tuple, hard_relabel_round, HashRuleTable};
pub use matching::mutual_match;
pub use quality::{coverage_ratio, label_histogram_similarity};
pub use similarity::{cross_similarity, cross_similarity_among, SimilarityMatrix};
pub use soft::soft_relabel_round;
pub use state::{init_labels, Label, LabelState, Side};
pub use tuple::{propagate, propagate_nodes, TupleMatrix, TupleRow};
