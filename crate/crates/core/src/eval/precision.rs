use super::ranking::AlignmentRanking;
use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Share of held-out pairs whose counterpart is within the top `n`, averaged
/// over both directions.
pub fn precision_at_n(
    source_to_target: &AlignmentRanking,
    target_to_source: &AlignmentRanking,
    test_pairs: &[(NodeId, NodeId)],
    n: usize,
) -> Result<f64> {
    if test_pairs.is_empty() {
        return Err(Error::Empty("test pair set"));
    }
    let hit = |r: &AlignmentRanking, q: NodeId, c: NodeId| r.rank_of(q, c).is_some_and(|k| k < n);
    let forward = test_pairs.iter().filter(|&&(s, t)| hit(source_to_target, s, t)).count();
    let backward = test_pairs.iter().filter(|&&(s, t)| hit(target_to_source, t, s)).count();
    Ok((forward + backward) as f64 / (2 * test_pairs.len()) as f64)
}

pub fn precision_curve(
    source_to_target: &AlignmentRanking,
    target_to_source: &AlignmentRanking,
    test_pairs: &[(NodeId, NodeId)],
    ns: &[usize],
) -> Result<Vec<(usize, f64)>> {
    ns.iter()
        .map(|&n| precision_at_n(source_to_target, target_to_source, test_pairs, n).map(|p| (n, p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{rank_by_score, Direction};
    use crate::exec::Exec;

    fn ranking(dir: Direction, scores: &[Vec<f64>]) -> AlignmentRanking {
        let q: Vec<_> = (0..scores.len()).collect();
        let c: Vec<_> = (0..scores[0].len()).collect();
        rank_by_score(dir, &q, &c, c.len(), Exec::Sequential, |a, b| scores[a][b]).unwrap()
    }

    #[test]
    fn hand_evaluated() {
        let pairs = [(0, 0), (1, 1)];
        // forward: query 0 ranks 1 first (miss), query 1 ranks 1 first (hit)
        let fwd = ranking(Direction::SourceToTarget, &[vec![0.1, 0.9], vec![0.2, 0.8]]);
        let bwd = ranking(Direction::TargetToSource, &[vec![0.9, 0.1], vec![0.2, 0.8]]);
        assert_eq!(precision_at_n(&fwd, &bwd, &pairs, 1).unwrap(), 0.75);
        assert_eq!(precision_at_n(&fwd, &bwd, &pairs, 2).unwrap(), 1.0);
        let perfect = ranking(Direction::SourceToTarget, &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let perfect_b = ranking(Direction::TargetToSource, &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(precision_at_n(&perfect, &perfect_b, &pairs, 1).unwrap(), 1.0);
        assert!(precision_at_n(&fwd, &bwd, &[], 1).is_err());
    }

    #[test]
    fn curve_is_monotone() {
        let scores: Vec<Vec<f64>> = (0..30).map(|i| (0..30).map(|j| ((i * 7 + j * 13) % 31) as f64).collect()).collect();
        let fwd = ranking(Direction::SourceToTarget, &scores);
        let bwd = ranking(Direction::TargetToSource, &scores);
        let pairs: Vec<_> = (0..30).map(|i| (i, i)).collect();
        let curve = precision_curve(&fwd, &bwd, &pairs, &[1, 5, 10, 15, 20, 25, 30]).unwrap();
        assert!(curve.windows(2).all(|w| w[0].1 <= w[1].1));
        assert_eq!(curve.last().unwrap().1, 1.0);
    }
}
