//! Core numbers, filtered edge scores and the resulting subgraph levels of
//! the twelve-node toy graph.

use cacose::decomposition::{decompose, DecompositionConfig};
use cacose::synthetic::toy_graph;

fn main() -> cacose::Result<()> {
    let g = toy_graph();
    let d = decompose(&g, DecompositionConfig::default())?;
    println!("core numbers: {:?}", d.cores.as_slice());
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        let (before, after) = (d.coreness.get(id), d.scores.get(id));
        let note = if before != after { "  (demoted)" } else { "" };
        println!("edge ({u:>2},{v:>2})  coreness {before}  score {after}{note}");
    }
    for level in d.family.levels() {
        println!(
            "level {}: nodes {:?}, {} edges",
            level.k,
            level.subgraph.nodes(),
            level.subgraph.edge_ids().len()
        );
    }
    println!("node 3 appears in levels {:?}", d.family.levels_containing(3));
    Ok(())
}
