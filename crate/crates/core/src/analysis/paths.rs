use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// What [`anp`] counts from each start node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    /// Vertex-distinct paths.
    #[default]
    Paths,
    /// Walks; vertices may repeat.
    Walks,
}

impl FromStr for PathKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paths" => Ok(PathKind::Paths),
            "walks" => Ok(PathKind::Walks),
            other => Err(Error::InvalidConfig(format!("unknown path kind {other:?} (expected paths|walks)"))),
        }
    }
}

/// Simple paths with exactly `n` edges starting at `v`. `n = 0` counts the
/// trivial path.
pub fn count_paths(g: &Graph, v: usize, n: usize) -> u64 {
    let mut on_path = vec![false; g.num_nodes()];
    on_path[v] = true;
    extend(g, v, n, &mut on_path)
}

fn extend(g: &Graph, u: usize, remaining: usize, on_path: &mut [bool]) -> u64 {
    if remaining == 0 {
        return 1;
    }
    let mut total = 0;
    for &w in g.neighbors(u) {
        if !on_path[w] {
            on_path[w] = true;
            total += extend(g, w, remaining - 1, on_path);
            on_path[w] = false;
        }
    }
    total
}

/// Walks with exactly `n` edges from every node, by dynamic programming.
pub fn count_walks_all(g: &Graph, n: usize) -> Vec<u128> {
    let mut cur = vec![1u128; g.num_nodes()];
    for _ in 0..n {
        cur = (0..g.num_nodes())
            .map(|u| g.neighbors(u).iter().map(|&w| cur[w]).sum())
            .collect();
    }
    cur
}

/// Mean number of length-`n` paths per node, isolated nodes included.
pub fn anp(g: &Graph, n: usize) -> Result<f64> {
    anp_with(g, n, PathKind::Paths)
}

pub fn anp_with(g: &Graph, n: usize, kind: PathKind) -> Result<f64> {
    if g.num_nodes() == 0 {
        return Err(Error::InvalidInput("average path count of an empty graph".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("hop length must be at least 1".into()));
    }
    let total: f64 = match kind {
        PathKind::Paths => (0..g.num_nodes())
            .into_par_iter()
            .map(|v| count_paths(g, v, n) as f64)
            .sum(),
        PathKind::Walks => count_walks_all(g, n).iter().map(|&c| c as f64).sum(),
    };
    Ok(total / g.num_nodes() as f64)
}
