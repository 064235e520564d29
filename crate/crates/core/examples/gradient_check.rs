//! Finite-difference check of the end-to-end gradient on the toy graph.

use cacose::autodiff::finite_diff_check;
use cacose::graph::{NodeFeatures, NodeLabels};
use cacose::model::{CacoseConfig, CacoseModel, PreparedGraph, Task};
use cacose::synthetic::toy_graph;

fn main() -> cacose::Result<()> {
    let g = toy_graph();
    let x = NodeFeatures::degree_one_hot(&g, 6);
    let labels = NodeLabels::new(vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2]);
    let config = CacoseConfig {
        hidden_dim: 4,
        subgraph_dim: 4,
        mlp_hidden: 5,
        ..CacoseConfig::default()
    };
    let prepared = PreparedGraph::from_graph(&g, &x, &config)?;
    let mut model = CacoseModel::new(config, x.dim(), labels.num_classes())?;
    model.ensure_levels(&prepared.ks())?;

    let report = finite_diff_check(
        &model.store,
        |tape, store| {
            let out = model.forward_with(tape, store, &prepared)?;
            let logits = model.head_with(Task::Node, tape, store, out.z_v)?;
            tape.cross_entropy(logits, labels.as_slice())
        },
        1e-5,
        1e-4,
    )?;
    for p in &report.params {
        println!(
            "{:<28} checked {:>3}  excluded {:>2}  max rel err {:.2e}",
            p.name, p.checked, p.excluded, p.max_rel_err
        );
    }
    println!("passed: {} (max rel err {:.2e})", report.passed, report.max_rel_err);
    Ok(())
}
