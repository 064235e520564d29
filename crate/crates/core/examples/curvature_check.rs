//! Exact Ollivier-Ricci curvature on random graphs, checking that edges with
//! no common neighbor are never positively curved.

use cacose::curvature::{ollivier_ricci, verify_no_common_neighbor_theorem};
use cacose::graph::{erdos_renyi, Graph};

fn main() -> cacose::Result<()> {
    let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])?;
    let square = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])?;
    println!("triangle edge kappa = {}", ollivier_ricci(&triangle, 0, 1)?.kappa);
    println!("4-cycle edge kappa  = {}", ollivier_ricci(&square, 0, 1)?.kappa);

    let (mut checked, mut violations) = (0, 0);
    for seed in 0..20 {
        let report = verify_no_common_neighbor_theorem(&erdos_renyi(30, 0.15, seed)?)?;
        checked += report.checked.len();
        violations += report.violations.len();
    }
    println!("{checked} zero-support edges checked, {violations} with positive curvature");
    Ok(())
}
