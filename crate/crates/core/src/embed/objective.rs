use super::grad::GradAccumulator;
use super::store::{EmbeddingStore, Table};
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::relabel::Side;

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(sigmoid(x))` without overflow for large `|x|`.
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelGrad {
    pub value: f64,
    pub grad_s: Vec<f64>,
    pub grad_t: Vec<f64>,
}

/// `(2p - 1) * cos(a, b)` and its partials. `None` if either vector is zero.
pub fn cosine_objective_grad(a: &[f64], b: &[f64], positive: bool) -> Option<LabelGrad> {
    let (na2, nb2) = (dot(a, a), dot(b, b));
    if na2 == 0.0 || nb2 == 0.0 {
        return None;
    }
    let sign = if positive { 1.0 } else { -1.0 };
    let denom = (na2 * nb2).sqrt();
    let cos = dot(a, b) / denom;
    let partial = |x: &[f64], y: &[f64], nx2: f64| -> Vec<f64> {
        x.iter()
            .zip(y)
            .map(|(xi, yi)| sign * (yi / denom - cos * xi / nx2))
            .collect()
    };
    Some(LabelGrad {
        value: sign * cos,
        grad_s: partial(a, b, na2),
        grad_t: partial(b, a, nb2),
    })
}

/// Label term for `(s, t)` read from the store's node table.
pub fn label_objective_grad(store: &EmbeddingStore, s: NodeId, t: NodeId, positive: bool) -> Result<LabelGrad> {
    let (ss, st) = (store.slot(Side::Source, s), store.slot(Side::Target, t));
    let a = store.row(Table::Node, ss);
    let b = store.row(Table::Node, st);
    cosine_objective_grad(a, b, positive).ok_or_else(|| Error::ZeroNorm(if dot(a, a) == 0.0 { ss } else { st }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextGrad {
    pub value: f64,
    /// d/d u(i)
    pub node_i: Vec<f64>,
    /// d/d u'(j)
    pub in_j: Vec<f64>,
    /// d/d u''(i)
    pub out_i: Vec<f64>,
    /// d/d u(j)
    pub node_j: Vec<f64>,
}

/// `log s(+-u_i.u'_j) + log s(+-u''_i.u_j)` with `+` for a true context and
/// `-` for a negative sample, plus partials.
pub fn context_objective_grad(node_i: &[f64], in_j: &[f64], out_i: &[f64], node_j: &[f64], positive: bool) -> ContextGrad {
    let sign = if positive { 1.0 } else { -1.0 };
    let x1 = dot(node_i, in_j);
    let x2 = dot(out_i, node_j);
    let g1 = sign * sigmoid(-sign * x1);
    let g2 = sign * sigmoid(-sign * x2);
    let scale = |v: &[f64], g: f64| v.iter().map(|x| g * x).collect::<Vec<f64>>();
    ContextGrad {
        value: log_sigmoid(sign * x1) + log_sigmoid(sign * x2),
        node_i: scale(in_j, g1),
        in_j: scale(node_i, g1),
        out_i: scale(node_j, g2),
        node_j: scale(out_i, g2),
    }
}

/// Adds the label term's ascent gradient into `acc`; returns its value.
pub(crate) fn accumulate_label(store: &EmbeddingStore, s: NodeId, t: NodeId, positive: bool, acc: &mut GradAccumulator) -> Result<f64> {
    let (ss, st) = (store.slot(Side::Source, s), store.slot(Side::Target, t));
    let a = store.row(Table::Node, ss);
    let b = store.row(Table::Node, st);
    let (na2, nb2) = (dot(a, a), dot(b, b));
    if na2 == 0.0 {
        return Err(Error::ZeroNorm(ss));
    }
    if nb2 == 0.0 {
        return Err(Error::ZeroNorm(st));
    }
    let sign = if positive { 1.0 } else { -1.0 };
    let denom = (na2 * nb2).sqrt();
    let cos = dot(a, b) / denom;
    acc.add2(Table::Node, ss, sign / denom, b, -sign * cos / na2, a);
    acc.add2(Table::Node, st, sign / denom, a, -sign * cos / nb2, b);
    Ok(sign * cos)
}

/// Adds the context term's ascent gradient into `acc`; returns its value.
pub(crate) fn accumulate_context(store: &EmbeddingStore, side: Side, i: NodeId, j: NodeId, positive: bool, acc: &mut GradAccumulator) -> f64 {
    let (si, sj) = (store.slot(side, i), store.slot(side, j));
    let node_i = store.row(Table::Node, si);
    let in_j = store.row(Table::InContext, sj);
    let out_i = store.row(Table::OutContext, si);
    let node_j = store.row(Table::Node, sj);
    let sign = if positive { 1.0 } else { -1.0 };
    let x1 = dot(node_i, in_j);
    let x2 = dot(out_i, node_j);
    let g1 = sign * sigmoid(-sign * x1);
    let g2 = sign * sigmoid(-sign * x2);
    acc.add(Table::Node, si, g1, in_j);
    acc.add(Table::InContext, sj, g1, node_i);
    acc.add(Table::OutContext, si, g2, node_j);
    acc.add(Table::Node, sj, g2, out_i);
    log_sigmoid(sign * x1) + log_sigmoid(sign * x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn aligned_vectors_are_stationary() {
        let a = [0.3, -0.2, 0.5];
        let g = cosine_objective_grad(&a, &a, true).unwrap();
        assert_eq!(g.value, 1.0);
        assert!(g.grad_s.iter().chain(&g.grad_t).all(|x| x.abs() < 1e-15));
        let g = cosine_objective_grad(&a, &a, false).unwrap();
        assert_eq!(g.value, -1.0);
        assert!(g.grad_s.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn orthogonal_unit_vectors() {
        let g = cosine_objective_grad(&[1.0, 0.0], &[0.0, 1.0], true).unwrap();
        assert_eq!(g.value, 0.0);
        assert_eq!(g.grad_s, vec![0.0, 1.0]);
        assert_eq!(g.grad_t, vec![1.0, 0.0]);
        assert!(cosine_objective_grad(&[0.0, 0.0], &[0.0, 1.0], true).is_none());
    }

    #[test]
    fn context_values() {
        let z = [0.0; 4];
        for pos in [true, false] {
            let g = context_objective_grad(&z, &z, &z, &z, pos);
            assert!((g.value - 2.0 * 0.5f64.ln()).abs() < 1e-15);
            assert!((g.value + 1.3863).abs() < 1e-4);
        }
        // u_i.u'_j = 2, u''_i.u_j = 0
        let g = context_objective_grad(&[1.0, 1.0], &[1.0, 1.0], &[0.0, 0.0], &[1.0, 0.0], true);
        assert!((g.value - (log_sigmoid(2.0) + 0.5f64.ln())).abs() < 1e-15);
        assert!((g.value + 0.8201).abs() < 1e-4);
        // d/dx log s(x) = s(-x)
        assert_eq!(sigmoid(-0.0), 0.5);
        let g = context_objective_grad(&[0.0], &[1.0], &[0.0], &[0.0], true);
        assert_eq!(g.node_i, vec![0.5]);
    }

    #[test]
    fn log_sigmoid_is_stable() {
        assert!((log_sigmoid(-800.0) + 800.0).abs() < 1e-9);
        assert_eq!(log_sigmoid(800.0), 0.0);
        assert!((log_sigmoid(0.3) - sigmoid(0.3).ln()).abs() < 1e-15);
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
    }

    #[test]
    fn finite_differences_d8() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let h = 1e-5;
        let mut v = || (0..8).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
        for k in 0..100 {
            let pos = k % 2 == 0;
            let (a, b) = (v(), v());
            let g = cosine_objective_grad(&a, &b, pos).unwrap();
            let f = |a: &[f64], b: &[f64]| cosine_objective_grad(a, b, pos).unwrap().value;
            for d in 0..8 {
                let (mut ap, mut am) = (a.clone(), a.clone());
                ap[d] += h;
                am[d] -= h;
                assert!(rel_err((f(&ap, &b) - f(&am, &b)) / (2.0 * h), g.grad_s[d]) < 1e-4);
            }

            let (ni, ij, oi, nj) = (v(), v(), v(), v());
            let g = context_objective_grad(&ni, &ij, &oi, &nj, pos);
            let f = |x: [&[f64]; 4]| context_objective_grad(x[0], x[1], x[2], x[3], pos).value;
            let args = [ni, ij, oi, nj];
            let grads = [&g.node_i, &g.in_j, &g.out_i, &g.node_j];
            for (which, grad) in grads.iter().enumerate() {
                for d in 0..8 {
                    let mut p = args.clone();
                    let mut m = args.clone();
                    p[which][d] += h;
                    m[which][d] -= h;
                    let fd = (f([&p[0], &p[1], &p[2], &p[3]]) - f([&m[0], &m[1], &m[2], &m[3]])) / (2.0 * h);
                    assert!(rel_err(fd, grad[d]) < 1e-4, "arg {which} coord {d}");
                }
            }
        }
    }
}
