//! Ollivier-Ricci curvature of edges under uniform one-step walk measures,
//! with an exact Wasserstein-1 solver.

pub mod transport;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_distance, Graph};

/// Tolerance for sign checks on κ.
pub const SIGN_TOLERANCE: f64 = 1e-9;

/// Uniform measure on `N(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkMeasure {
    center: usize,
    support: Vec<usize>,
}

impl WalkMeasure {
    pub fn center(&self) -> usize {
        self.center
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Mass on each support node.
    pub fn mass(&self) -> f64 {
        1.0 / self.support.len() as f64
    }

    pub fn mass_at(&self, v: usize) -> f64 {
        if self.support.binary_search(&v).is_ok() {
            self.mass()
        } else {
            0.0
        }
    }
}

pub fn walk_measure(g: &Graph, u: usize) -> Result<WalkMeasure> {
    g.check_node(u)?;
    if g.degree(u) == 0 {
        return Err(Error::IsolatedNode(u));
    }
    Ok(WalkMeasure {
        center: u,
        support: g.neighbors(u).to_vec(),
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact `W1(a, b)` over hop distance in `g`.
///
/// Both measures are uniform, so scaling by `L = lcm(|A|, |B|)` turns the
/// problem into an integer transportation problem that is solved exactly;
/// the only rounding is the final division by `L`.
pub fn wasserstein1(g: &Graph, a: &WalkMeasure, b: &WalkMeasure) -> Result<f64> {
    let cost = distance_block(g, a.support(), b.support())?;
    let (na, nb) = (a.support.len() as u64, b.support.len() as u64);
    let l = na / gcd(na, nb) * nb;
    let supply = vec![l / na; a.support.len()];
    let demand = vec![l / nb; b.support.len()];
    let plan = transport::min_cost_transport(&supply, &demand, &cost);
    Ok(plan.cost as f64 / l as f64)
}

/// Hop distances between every `p ∈ from` and `q ∈ to`.
pub fn distance_block(g: &Graph, from: &[usize], to: &[usize]) -> Result<Vec<Vec<u64>>> {
    from.iter()
        .map(|&p| {
            let dist = bfs_distance(g, p)?;
            to.iter()
                .map(|&q| {
                    dist[q].map(|d| d as u64).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "transport unbounded: nodes {p} and {q} lie in different components"
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureResult {
    pub u: usize,
    pub v: usize,
    /// Common neighbors of `u` and `v` in the full graph.
    pub support: usize,
    pub w1: f64,
    pub kappa: f64,
}

/// `κ(u, v) = 1 − W1(μ_u, μ_v)` for an edge (`d(u, v) = 1`).
pub fn ollivier_ricci(g: &Graph, u: usize, v: usize) -> Result<CurvatureResult> {
    if !g.has_edge(u, v) {
        return Err(Error::NotAnEdge { u, v });
    }
    let w1 = wasserstein1(g, &walk_measure(g, u)?, &walk_measure(g, v)?)?;
    Ok(CurvatureResult {
        u,
        v,
        support: g.common_neighbor_count(u, v),
        w1,
        kappa: 1.0 - w1,
    })
}

/// Curvature of every edge, in edge-id order.
pub fn edge_curvatures(g: &Graph) -> Result<Vec<CurvatureResult>> {
    g.edges().par_iter().map(|&(u, v)| ollivier_ricci(g, u, v)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    /// Every edge with no common neighbor, with its curvature.
    pub checked: Vec<CurvatureResult>,
    /// Subset of `checked` with `κ > SIGN_TOLERANCE`.
    pub violations: Vec<CurvatureResult>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `N(u) ∩ N(v) = ∅ ⇒ κ(u, v) ≤ 0` on every such edge of `g`.
pub fn verify_no_common_neighbor_theorem(g: &Graph) -> Result<TheoremReport> {
    let checked: Vec<CurvatureResult> = g
        .edges()
        .par_iter()
        .filter(|&&(u, v)| g.common_neighbor_count(u, v) == 0)
        .map(|&(u, v)| ollivier_ricci(g, u, v))
        .collect::<Result<_>>()?;
    let violations = checked.iter().filter(|r| r.kappa > SIGN_TOLERANCE).cloned().collect();
    Ok(TheoremReport { checked, violations })
}
