use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AnchorSet, NodeId};

/// Compressed label id; 0 means unlabeled.
pub type Label = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::Source => "s",
            Side::Target => "t",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelState {
    pub labels_s: Vec<Label>,
    pub labels_t: Vec<Label>,
    /// Size of the compressed label set; every nonzero label is `<= label_count`.
    pub label_count: usize,
    /// Labels `1..=anchor_ceiling` belong to anchors.
    pub anchor_ceiling: usize,
}

/// Anchor pair `k` gets label `k + 1` on both sides; everything else is 0.
pub fn init_labels(anchors: &AnchorSet, n_s: usize, n_t: usize) -> LabelState {
    let mut labels_s = vec![0; n_s];
    let mut labels_t = vec![0; n_t];
    for (k, &(s, t)) in anchors.pairs().iter().enumerate() {
        labels_s[s] = k + 1;
        labels_t[t] = k + 1;
    }
    if anchors.is_empty() {
        log::warn!("no anchors: label state is all zeros");
    }
    LabelState {
        labels_s,
        labels_t,
        label_count: anchors.len(),
        anchor_ceiling: anchors.len(),
    }
}

impl LabelState {
    pub fn labels(&self, side: Side) -> &[Label] {
        match side {
            Side::Source => &self.labels_s,
            Side::Target => &self.labels_t,
        }
    }

    pub fn label_of(&self, side: Side, node: NodeId) -> Label {
        self.labels(side)[node]
    }

    pub fn labeled_count(&self, side: Side) -> usize {
        self.labels(side).iter().filter(|&&l| l != 0).count()
    }

    /// `label_count=<k>` header, then `network<TAB>node<TAB>label` lines.
    pub fn write_dump(&self, path: &Path) -> Result<()> {
        let mut w = crate::graph::io_create(path)?;
        let io = |e| Error::io(path, e);
        writeln!(w, "label_count={}", self.label_count).map_err(io)?;
        for side in [Side::Source, Side::Target] {
            for (node, label) in self.labels(side).iter().enumerate() {
                writeln!(w, "{}\t{node}\t{label}", side.tag()).map_err(io)?;
            }
        }
        w.flush().map_err(io)
    }
}
