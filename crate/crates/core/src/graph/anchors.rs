use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{IdMap, NodeId};
use crate::error::{Error, Result};

/// Known cross-network correspondences. Pair `k` (0-based) owns label `k + 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorSet {
    pairs: Vec<(NodeId, NodeId)>,
}

impl AnchorSet {
    /// Validates that ids are in range and that no node is used twice on
    /// either side.
    pub fn new(pairs: Vec<(NodeId, NodeId)>, n_s: usize, n_t: usize) -> Result<Self> {
        let mut seen_s = vec![false; n_s];
        let mut seen_t = vec![false; n_t];
        for &(s, t) in &pairs {
            if s >= n_s || t >= n_t {
                return Err(Error::InvalidArgument(format!(
                    "anchor ({s}, {t}) out of range for graphs of size {n_s}/{n_t}"
                )));
            }
            if std::mem::replace(&mut seen_s[s], true) || std::mem::replace(&mut seen_t[t], true) {
                return Err(Error::InvalidArgument(format!("anchor ({s}, {t}) reuses a node")));
            }
        }
        Ok(AnchorSet { pairs })
    }

    /// Maps pairs of original ids through the graphs' id tables.
    pub fn from_original(raw: &[(u64, u64)], ids_s: &IdMap, ids_t: &IdMap) -> Result<Self> {
        let pairs = raw
            .iter()
            .map(|&(a, b)| match (ids_s.dense(a), ids_t.dense(b)) {
                (Some(s), Some(t)) => Ok((s, t)),
                _ => Err(Error::InvalidArgument(format!("anchor ({a}, {b}) names an unknown node"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs, ids_s.len(), ids_t.len())
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn s_index(&self) -> HashMap<NodeId, usize> {
        self.pairs.iter().enumerate().map(|(k, &(s, _))| (s, k)).collect()
    }

    pub fn t_index(&self) -> HashMap<NodeId, usize> {
        self.pairs.iter().enumerate().map(|(k, &(_, t))| (t, k)).collect()
    }
}

/// Splits a correspondence into `floor(ratio * len)` anchors and held-out test
/// pairs. Both halves are returned sorted by source node.
pub fn sample_anchors(
    n_s: usize,
    n_t: usize,
    correspondence: &[(NodeId, NodeId)],
    ratio: f64,
    seed: u64,
) -> Result<(AnchorSet, Vec<(NodeId, NodeId)>)> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidArgument(format!("anchor ratio {ratio} outside [0, 1]")));
    }
    let k = (ratio * correspondence.len() as f64).floor() as usize;
    let mut shuffled = correspondence.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut test = shuffled.split_off(k);
    shuffled.sort_unstable();
    test.sort_unstable();
    if k == 0 {
        log::warn!("anchor sample is empty; relabeling will have nothing to propagate");
    }
    Ok((AnchorSet::new(shuffled, n_s, n_t)?, test))
}
