use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng;

/// `G(n, p)` random graph, reproducible for a given `(n, p, seed)`.
///
/// Uses geometric skipping over the lexicographic pair sequence, so the cost
/// is proportional to the number of generated edges rather than `n²`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    let mut edges = Vec::new();
    if p == 1.0 {
        for v in 0..n {
            for u in 0..v {
                edges.push((u, v));
            }
        }
    } else if p > 0.0 && n > 1 {
        let mut rng = rng::stream(seed, rng::GENERATOR);
        let log_q = (1.0 - p).ln();
        let (mut v, mut w): (usize, i64) = (1, -1);
        while v < n {
            let r: f64 = rng.gen();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + if skip.is_finite() { skip.min(i64::MAX as f64 / 4.0) as i64 } else { 0 };
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Planted-partition graph: `block_sizes` consecutive blocks, edges within a
/// block with probability `p_in` and across blocks with `p_out`. Returns the
/// graph and each node's block index.
pub fn stochastic_block_model(
    block_sizes: &[usize],
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(Graph, Vec<usize>)> {
    for p in [p_in, p_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
    }
    let block: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &size)| std::iter::repeat(b).take(size))
        .collect();
    let n = block.len();
    let mut rng = rng::stream(seed, rng::GENERATOR);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if block[u] == block[v] { p_in } else { p_out };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok((Graph::from_edges(n, edges)?, block))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        assert_eq!(erdos_renyi(100, 0.0, 1).unwrap().num_edges(), 0);
        assert_eq!(erdos_renyi(10, 1.0, 1).unwrap().num_edges(), 45);
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(matches!(erdos_renyi(5, 1.5, 0), Err(Error::InvalidProbability(_))));
        assert!(matches!(erdos_renyi(5, -0.1, 0), Err(Error::InvalidProbability(_))));
    }

    #[test]
    fn reproducible() {
        let a = erdos_renyi(200, 0.05, 42).unwrap();
        let b = erdos_renyi(200, 0.05, 42).unwrap();
        let c = erdos_renyi(200, 0.05, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sbm_block_labels() {
        let (g, block) = stochastic_block_model(&[3, 4], 1.0, 0.0, 0).unwrap();
        assert_eq!(block, vec![0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(g.num_edges(), 3 + 6);
    }
}
