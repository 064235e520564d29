use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decomposition::core_numbers;
use crate::error::{Error, Result};
use crate::graph::erdos_renyi;

/// One `(n, p)` cell. Skipped cells carry a reason and no measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalabilityRecord {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub edges: Option<usize>,
    pub max_degree: Option<usize>,
    pub k_max: Option<usize>,
    pub skipped: Option<String>,
    /// Wall-clock seconds for generation plus peeling; kept out of the
    /// serialized record so outputs are reproducible.
    #[serde(skip)]
    pub elapsed_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalabilityConfig {
    pub sizes: Vec<usize>,
    pub densities: Vec<f64>,
    pub seed: u64,
    /// Carried into the run metadata; peeling itself does not filter edges.
    pub delta: usize,
    /// Largest expected edge count `p·n(n−1)/2` that is attempted.
    pub edge_budget: f64,
}

impl Default for ScalabilityConfig {
    fn default() -> Self {
        ScalabilityConfig {
            sizes: vec![100, 1000],
            densities: vec![0.01, 0.05, 0.10, 0.25, 0.50],
            seed: 0,
            delta: 3,
            edge_budget: 5.0e7,
        }
    }
}

/// Hardware guard rails: `p ≤ 0.25` from `10^4` nodes and `p ≤ 0.10` from
/// `10^5`, plus the edge budget.
pub fn skip_reason(n: usize, p: f64, edge_budget: f64) -> Option<String> {
    if n >= 100_000 && p > 0.10 {
        return Some(format!("density {p} above 0.10 for n ≥ 1e5"));
    }
    if n >= 10_000 && p > 0.25 {
        return Some(format!("density {p} above 0.25 for n ≥ 1e4"));
    }
    let expected = p * n as f64 * (n.saturating_sub(1)) as f64 / 2.0;
    if expected > edge_budget {
        return Some(format!("expected {expected:.0} edges exceed budget {edge_budget:.0}"));
    }
    None
}

/// Generates `G(n, p)` for every pair and records its maximum coreness.
pub fn scalability_study(config: &ScalabilityConfig) -> Result<Vec<ScalabilityRecord>> {
    if config.sizes.is_empty() || config.densities.is_empty() {
        return Err(Error::InvalidConfig("scalability study needs sizes and densities".into()));
    }
    let mut out = Vec::with_capacity(config.sizes.len() * config.densities.len());
    for &n in &config.sizes {
        for &p in &config.densities {
            let mut rec = ScalabilityRecord {
                n,
                p,
                seed: config.seed,
                edges: None,
                max_degree: None,
                k_max: None,
                skipped: skip_reason(n, p, config.edge_budget),
                elapsed_secs: 0.0,
            };
            if rec.skipped.is_none() {
                let start = Instant::now();
                let g = erdos_renyi(n, p, config.seed)?;
                let k_max = core_numbers(&g).k_max();
                rec.elapsed_secs = start.elapsed().as_secs_f64();
                rec.edges = Some(g.num_edges());
                rec.max_degree = Some(g.max_degree());
                rec.k_max = Some(k_max);
            }
            out.push(rec);
        }
    }
    Ok(out)
}
