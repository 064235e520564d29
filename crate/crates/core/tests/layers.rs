mod common;

use cacose::autodiff::{ParamStore, Tape};
use cacose::graph::erdos_renyi;
use cacose::layers::{normalize_adjacency, pooled_count, top_k_by_score, Activation, CrossAttention, GcnLayer, MlpHead, SagPool};
use cacose::Error;
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Smallest integer `k` with `10·k ≥ tenths·n`.
fn exact_ceil(tenths: usize, n: usize) -> usize {
    (tenths * n).div_ceil(10)
}

#[test]
fn pooled_count_sweep_is_exact() {
    for n in 1..=200 {
        for tenths in 1..=10 {
            assert_eq!(pooled_count(tenths as f64 / 10.0, n), exact_ceil(tenths, n), "N={n} PR=0.{tenths}");
        }
    }
    assert_eq!(pooled_count(0.5, 0), 0);
    assert_eq!(pooled_count(0.001, 5), 1);
}

#[test]
fn sagpool_keeps_top_scores_and_averages_scaled_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = erdos_renyi(9, 0.4, 1).unwrap();
    let a_hat = normalize_adjacency(&g);
    let x = random_matrix(9, 4, &mut rng);
    let mut store = ParamStore::new();
    let pool = SagPool::new(&mut store, "pool", 4, 0.5, Activation::Tanh, &mut rng).unwrap();
    let mut tape = Tape::new();
    let a = tape.constant(a_hat.clone()).unwrap();
    let h = tape.constant(x.clone()).unwrap();
    let out = pool.forward(&mut tape, &store, a, h).unwrap();
    assert_eq!(out.selected.len(), 5);

    // Independent score: tanh(Â X θ).
    let theta = to_mat(store.value(pool.attention.weight));
    let scores = mm(&mm(&to_mat(&a_hat), &to_mat(&x)), &theta);
    for (v, s) in scores.iter().enumerate() {
        assert!((s[0].tanh() - out.scores[v]).abs() < 1e-12);
    }
    let mut order: Vec<usize> = (0..9).collect();
    order.sort_by(|&a, &b| out.scores[b].total_cmp(&out.scores[a]).then(a.cmp(&b)));
    assert_eq!(out.selected, order[..5].to_vec());

    let z = tape.value(out.z).row(0).to_vec();
    for c in 0..4 {
        let want: f64 = out.selected.iter().map(|&v| out.scores[v] * x.get(v, c)).sum::<f64>() / 5.0;
        assert!((z[c] - want).abs() < 1e-12);
    }
}

#[test]
fn sagpool_rejects_bad_ratio_and_empty_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut store = ParamStore::new();
    for r in [0.0, -0.1, 1.5, f64::NAN] {
        assert!(matches!(SagPool::new(&mut store, "p", 2, r, Activation::Relu, &mut rng), Err(Error::InvalidConfig(_))));
    }
}

#[test]
fn normalized_adjacency_is_symmetric_with_unit_spectral_bound() {
    for g in corpus(30, 25, 41) {
        let a = normalize_adjacency(&g);
        for i in 0..g.num_nodes() {
            assert!((a.get(i, i) - 1.0 / (g.degree(i) + 1) as f64).abs() < 1e-15);
            for j in 0..g.num_nodes() {
                assert_eq!(a.get(i, j), a.get(j, i));
                let expected_nonzero = i == j || g.has_edge(i, j);
                assert_eq!(a.get(i, j) != 0.0, expected_nonzero);
            }
        }
        // Power iteration: the largest eigenvalue of Â is 1 on any graph.
        if g.num_nodes() > 0 {
            let mut v = vec![1.0; g.num_nodes()];
            let mut lambda = 0.0;
            for _ in 0..200 {
                let w: Vec<f64> = (0..g.num_nodes()).map(|i| (0..g.num_nodes()).map(|j| a.get(i, j) * v[j]).sum()).collect();
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                lambda = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v = w.iter().map(|x| x / norm).collect();
            }
            assert!(lambda <= 1.0 + 1e-9, "{lambda}");
        }
    }
}

#[test]
fn gcn_layer_matches_dense_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = erdos_renyi(8, 0.3, 2).unwrap();
    let a_hat = normalize_adjacency(&g);
    let x = random_matrix(8, 3, &mut rng);
    let mut store = ParamStore::new();
    let layer = GcnLayer::new(&mut store, "gcn", 3, 5, Activation::Relu, &mut rng).unwrap();
    let mut tape = Tape::new();
    let a = tape.constant(a_hat.clone()).unwrap();
    let h = tape.constant(x.clone()).unwrap();
    let out = layer.forward(&mut tape, &store, a, h).unwrap();
    let want: Mat = mm(&mm(&to_mat(&a_hat), &to_mat(&x)), &to_mat(store.value(layer.weight)))
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.max(0.0)).collect())
        .collect();
    assert!(max_abs_diff(&to_mat(tape.value(out)), &want) < 1e-12);
    let wrong = tape.constant(random_matrix(8, 4, &mut rng)).unwrap();
    assert!(matches!(layer.forward(&mut tape, &store, a, wrong), Err(Error::ShapeMismatch { .. })));
}

#[test]
fn attention_head_count_must_divide_dim() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut store = ParamStore::new();
    assert!(CrossAttention::new(&mut store, "a", 6, 4, &mut rng).is_err());
    assert!(CrossAttention::new(&mut store, "b", 6, 0, &mut rng).is_err());
    let one = CrossAttention::new(&mut store, "c", 6, 1, &mut rng).unwrap();
    let three = CrossAttention::new(&mut store, "d", 6, 3, &mut rng).unwrap();
    assert!(one.wo.is_none() && three.wo.is_some());
}

#[test]
fn single_head_attention_matches_dense_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut store = ParamStore::new();
    let att = CrossAttention::new(&mut store, "a", 4, 1, &mut rng).unwrap();
    let z = random_matrix(3, 4, &mut rng);
    let mut tape = Tape::new();
    let zv = tape.constant(z.clone()).unwrap();
    let out = att.forward(&mut tape, &store, zv).unwrap();
    let zm = to_mat(&z);
    let q = mm(&zm, &to_mat(store.value(att.wq)));
    let k = mm(&zm, &to_mat(store.value(att.wk)));
    let v = mm(&zm, &to_mat(store.value(att.wv)));
    let mut weights = vec![vec![0.0; 3]; 3];
    for i in 0..3 {
        let logits: Vec<f64> = (0..3).map(|j| (0..4).map(|c| q[i][c] * k[j][c]).sum::<f64>() / 2.0).collect();
        let m = logits.iter().cloned().fold(f64::MIN, f64::max);
        let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
        let s: f64 = e.iter().sum();
        for j in 0..3 {
            weights[i][j] = e[j] / s;
        }
    }
    assert!(max_abs_diff(&to_mat(&out.weights[0]), &weights) < 1e-12);
    assert!(max_abs_diff(&to_mat(tape.value(out.out)), &mm(&weights, &v)) < 1e-12);
}

#[test]
fn mlp_head_output_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut store = ParamStore::new();
    let head = MlpHead::new(&mut store, "head", 6, 5, 3, &mut rng).unwrap();
    let mut tape = Tape::new();
    let x = tape.constant(random_matrix(4, 6, &mut rng)).unwrap();
    let y = head.forward(&mut tape, &store, x).unwrap();
    assert_eq!(tape.shape(y), (4, 3));
}

proptest! {
    #[test]
    fn top_k_is_a_sorted_prefix(scores in prop::collection::vec(-3i32..3, 1..30), k in 0usize..30) {
        let scores: Vec<f64> = scores.into_iter().map(f64::from).collect();
        let k = k.min(scores.len());
        let top = top_k_by_score(&scores, k);
        prop_assert_eq!(top.len(), k);
        for w in top.windows(2) {
            prop_assert!(scores[w[0]] > scores[w[1]] || (scores[w[0]] == scores[w[1]] && w[0] < w[1]));
        }
        // Everything left out scores no higher than the weakest kept node.
        if let Some(&last) = top.last() {
            for v in (0..scores.len()).filter(|v| !top.contains(v)) {
                prop_assert!(scores[v] < scores[last] || (scores[v] == scores[last] && v > last));
            }
        }
    }

    #[test]
    fn attention_rows_sum_to_one(ns in 1usize..8, heads_pow in 0u32..3, seed in any::<u64>()) {
        let heads = 1usize << heads_pow;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut store = ParamStore::new();
        let att = CrossAttention::new(&mut store, "a", 8, heads, &mut rng).unwrap();
        let mut tape = Tape::new();
        let z = tape.constant(random_matrix(ns, 8, &mut rng).map(|v| 10.0 * v)).unwrap();
        let out = att.forward(&mut tape, &store, z).unwrap();
        prop_assert_eq!(out.weights.len(), heads);
        for w in &out.weights {
            prop_assert_eq!(w.shape(), (ns, ns));
            for r in 0..ns {
                prop_assert!((w.row(r).iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            }
        }
        prop_assert_eq!(tape.shape(out.out), (ns, 8));
    }
}
