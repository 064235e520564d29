//! Graph classification: chained triangles against 6-cliques.

use cacose::model::{train_graph_classifier, CacoseConfig};
use cacose::synthetic::triangles_vs_cliques;

fn main() -> cacose::Result<()> {
    let samples = triangles_vs_cliques(20, 0);
    let config = CacoseConfig::graph_classification();
    let (model, report) = train_graph_classifier(&samples, &config)?;
    println!("levels with encoders: {:?}", model.levels());
    println!(
        "{} epochs, best epoch {}, test accuracy {:.3}, {:.1}s",
        report.epochs_run(),
        report.best_epoch,
        report.test_acc,
        report.wall_clock_secs
    );
    Ok(())
}
