use super::tuple::TupleMatrix;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::NodeId;

/// Cosine similarity of L2-normalised tuple rows, stored by row.
///
/// Only rows with a nonzero tuple are present and each row holds only its
/// nonzero entries, sorted by column. Absent entries are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub(crate) rows: Vec<(NodeId, Vec<(NodeId, f64)>)>,
    pub(crate) n_rows: usize,
    pub(crate) n_cols: usize,
}

impl SimilarityMatrix {
    /// Builds from a dense matrix, dropping non-positive entries.
    pub fn from_dense(dense: &[Vec<f64>]) -> Self {
        let n_cols = dense.first().map_or(0, Vec::len);
        let rows = dense
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let e: Vec<_> = r.iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(j, &v)| (j, v)).collect();
                (!e.is_empty()).then_some((i, e))
            })
            .collect();
        SimilarityMatrix {
            rows,
            n_rows: dense.len(),
            n_cols,
        }
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> f64 {
        self.rows
            .binary_search_by_key(&i, |r| r.0)
            .ok()
            .and_then(|k| {
                let row = &self.rows[k].1;
                row.binary_search_by_key(&j, |e| e.0).ok().map(|p| row[p].1)
            })
            .unwrap_or(0.0)
    }

    /// Stored rows as `(row id, [(column id, value)])`.
    pub fn rows(&self) -> &[(NodeId, Vec<(NodeId, f64)>)] {
        &self.rows
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.1.len()).sum()
    }
}

/// Similarity between every row of `tp_s` and every row of `tp_t`.
pub fn cross_similarity(tp_s: &TupleMatrix, tp_t: &TupleMatrix, exec: Exec) -> Result<SimilarityMatrix> {
    let s_ids: Vec<NodeId> = (0..tp_s.len()).collect();
    let t_ids: Vec<NodeId> = (0..tp_t.len()).collect();
    cross_similarity_among(tp_s, &s_ids, tp_t, &t_ids, exec)
}

/// Like [`cross_similarity`], but row `k` of `tp_s` is reported as node
/// `s_ids[k]` (likewise for columns). Ids must be ascending.
pub fn cross_similarity_among(
    tp_s: &TupleMatrix,
    s_ids: &[NodeId],
    tp_t: &TupleMatrix,
    t_ids: &[NodeId],
    exec: Exec,
) -> Result<SimilarityMatrix> {
    if tp_s.width() != tp_t.width() {
        return Err(Error::DimensionMismatch(tp_s.width(), tp_t.width()));
    }
    assert_eq!(tp_s.len(), s_ids.len());
    assert_eq!(tp_t.len(), t_ids.len());
    debug_assert!(s_ids.windows(2).all(|w| w[0] < w[1]) && t_ids.windows(2).all(|w| w[0] < w[1]));

    let sq_norm = |row: &[(usize, u32)]| row.iter().map(|&(_, c)| c as u64 * c as u64).sum::<u64>();
    let t_norms: Vec<u64> = tp_t.rows.iter().map(|r| sq_norm(r)).collect();

    // label -> [(column position, count)]
    let mut by_label: Vec<Vec<(usize, u32)>> = vec![Vec::new(); tp_t.width() + 1];
    for (pos, row) in tp_t.rows.iter().enumerate() {
        for &(l, c) in row {
            by_label[l].push((pos, c));
        }
    }

    let s_positions: Vec<usize> = (0..tp_s.len()).filter(|&k| !tp_s.rows[k].is_empty()).collect();
    let rows = exec.map_slice(&s_positions, |&k| {
        let row = &tp_s.rows[k];
        let ns = sq_norm(row);
        let mut dot = vec![0u64; tp_t.len()];
        let mut touched = Vec::new();
        for &(l, c) in row {
            for &(pos, d) in &by_label[l] {
                if dot[pos] == 0 {
                    touched.push(pos);
                }
                dot[pos] += c as u64 * d as u64;
            }
        }
        touched.sort_unstable();
        let entries = touched
            .into_iter()
            .map(|pos| {
                let v = dot[pos] as f64 / (ns as f64 * t_norms[pos] as f64).sqrt();
                (t_ids[pos], v.clamp(0.0, 1.0))
            })
            .collect();
        (s_ids[k], entries)
    });

    Ok(SimilarityMatrix {
        rows,
        n_rows: s_ids.last().map_or(0, |&m| m + 1),
        n_cols: t_ids.last().map_or(0, |&m| m + 1),
    })
}
