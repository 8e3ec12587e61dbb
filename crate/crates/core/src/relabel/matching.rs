use super::similarity::SimilarityMatrix;
use crate::graph::NodeId;

/// Pairs `(i, j)` whose entry is positive and is the maximum of both row `i`
/// and column `j`. Candidates are taken in ascending `(i, j)` order and a
/// candidate is kept only while its row and column are still free, so every
/// node appears at most once.
pub fn mutual_match(sim: &SimilarityMatrix) -> Vec<(NodeId, NodeId)> {
    let mut col_max = vec![0.0f64; sim.n_cols];
    for (_, row) in &sim.rows {
        for &(j, v) in row {
            col_max[j] = col_max[j].max(v);
        }
    }

    let mut taken = vec![false; sim.n_cols];
    let mut out = Vec::new();
    for (i, row) in &sim.rows {
        let row_max = row.iter().fold(0.0f64, |m, &(_, v)| m.max(v));
        if row_max <= 0.0 {
            continue;
        }
        for &(j, v) in row {
            if v == row_max && v == col_max[j] && !taken[j] {
                taken[j] = true;
                out.push((*i, j));
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let sim = SimilarityMatrix::from_dense(&[vec![0.0, 1.0, 0.4], vec![1.0, 0.6, 0.3], vec![0.0, 0.0, 1.0]]);
        assert_eq!(mutual_match(&sim), vec![(0, 1), (1, 0), (2, 2)]);
    }

    #[test]
    fn identity_and_zero() {
        let id: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        assert_eq!(mutual_match(&SimilarityMatrix::from_dense(&id)), (0..4).map(|i| (i, i)).collect::<Vec<_>>());
        assert!(mutual_match(&SimilarityMatrix::from_dense(&vec![vec![0.0; 3]; 3])).is_empty());
    }

    #[test]
    fn ties_resolved_in_ascending_order() {
        let sim = SimilarityMatrix::from_dense(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(mutual_match(&sim), vec![(0, 0), (1, 1)]);
        // row 1 ties with row 0 on column 0 but column 0 is claimed; its only
        // other entry is not a column max
        let sim = SimilarityMatrix::from_dense(&[vec![1.0, 0.9], vec![1.0, 0.5]]);
        assert_eq!(mutual_match(&sim), vec![(0, 0)]);
    }
}
