use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wlalign::embed::{train, TrainConfig};
use wlalign::eval::{candidate_pool, precision_at_n, rank_candidates, rsa_scores, Direction};
use wlalign::graph::{generate_er, perturb, sample_anchors, AnchorSet, Graph};
use wlalign::relabel::{relabel_until_convergence, RelabelMode, Side};
use wlalign::Exec;

fn permuted(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.node_count(), g.arcs().map(|(u, v)| (perm[u], perm[v])), !g.is_symmetric())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // Hard labels follow a node under any renumbering of the target copy.
    #[test]
    fn hard_relabel_is_permutation_equivariant(n in 5usize..60, p in 0.02f64..0.3, seed in any::<u64>(), k in 1usize..5) {
        let g = generate_er(n, p, seed).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let h = permuted(&g, &perm);
        let k = k.min(n);
        let anchors = AnchorSet::new((0..k).map(|i| (i, perm[i])).collect(), n, n).unwrap();
        let out = relabel_until_convergence(&g, &h, &anchors, RelabelMode::Hard, n, Exec::Sequential);
        prop_assert!(out.converged);
        for i in 0..n {
            prop_assert_eq!(out.state.label_of(Side::Source, i), out.state.label_of(Side::Target, perm[i]));
        }
    }

    // Soft relabeling never labels fewer nodes than hard relabeling.
    #[test]
    fn soft_covers_at_least_hard_on_copies(n in 5usize..60, p in 0.02f64..0.3, seed in any::<u64>()) {
        let g = generate_er(n, p, seed).unwrap();
        let corr: Vec<_> = (0..n).map(|i| (i, i)).collect();
        let (anchors, _) = sample_anchors(n, n, &corr, 0.2, seed).unwrap();
        let soft = relabel_until_convergence(&g, &g, &anchors, RelabelMode::Soft, n, Exec::Sequential);
        let hard = relabel_until_convergence(&g, &g, &anchors, RelabelMode::Hard, n, Exec::Sequential);
        prop_assert!(soft.state.labeled_count(Side::Source) >= hard.state.labeled_count(Side::Source));
    }
}

#[test]
fn pipeline_is_identical_across_execution_policies() {
    let base = generate_er(120, 0.05, 3).unwrap();
    let (target, _) = perturb(&base, 0.1, 0.1, 1, 4).unwrap();
    let corr: Vec<_> = (0..120).map(|i| (i, i)).collect();
    let (anchors, test) = sample_anchors(120, target.node_count(), &corr, 0.3, 5).unwrap();
    let cfg = TrainConfig {
        dim: 16,
        epochs: 2,
        max_rounds: 4,
        batch_size: 200,
        k_context: 5,
        ..Default::default()
    };
    let run = |exec| {
        let out = train(&base, &target, &anchors, &cfg, exec).unwrap();
        let qs: Vec<_> = test.iter().map(|p| p.0).collect();
        let qt: Vec<_> = test.iter().map(|p| p.1).collect();
        let (f, b) = (Direction::SourceToTarget, Direction::TargetToSource);
        let fw = rank_candidates(&out.store, &qs, &candidate_pool(target.node_count(), &anchors, f), f, 10, exec).unwrap();
        let bw = rank_candidates(&out.store, &qt, &candidate_pool(120, &anchors, b), b, 10, exec).unwrap();
        let rsa = rsa_scores(&base, &target, &test, &anchors, 0.5, exec);
        (out.store, fw, bw, rsa)
    };
    let seq = run(Exec::Sequential);
    let par = run(Exec::Parallel);
    assert_eq!(seq.0, par.0);
    assert_eq!(seq.1, par.1);
    assert_eq!(seq.2, par.2);
    assert_eq!(seq.3, par.3);
    let p1 = precision_at_n(&par.1, &par.2, &test, 1).unwrap();
    let p10 = precision_at_n(&par.1, &par.2, &test, 10).unwrap();
    assert!((0.0..=1.0).contains(&p1) && p1 <= p10);
}
