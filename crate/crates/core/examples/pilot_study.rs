//! Average path counts of a labelled graph, its densest levels and their
//! pooled subgraphs, next to the same-label-only counterparts.

use cacose::analysis::{pilot_study, PilotConfig};
use cacose::graph::NodeFeatures;
use cacose::synthetic::two_block_sbm;

fn main() -> cacose::Result<()> {
    let (g, labels) = two_block_sbm(30, 0.4, 0.08, 2)?;
    let x = NodeFeatures::degree_one_hot(&g, 16);
    let config = PilotConfig {
        hops: vec![2, 3],
        ..PilotConfig::default()
    };
    let report = pilot_study("sbm", &g, &labels, &x, &config)?;
    for w in &report.warnings {
        println!("warning: {w}");
    }
    for r in &report.records {
        println!(
            "{:<22} hops {}  nodes {:>2}  edges {:>3}  anp {:>10.2}",
            r.variant, r.hops, r.nodes, r.edges, r.anp
        );
    }
    for r in &report.ratios {
        println!(
            "level {} hops {}: homophilic/core {:?}, homophilic/pooled {:?}",
            r.level, r.hops, r.core_ratio, r.pooled_ratio
        );
    }
    Ok(())
}
