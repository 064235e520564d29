//! Maximum coreness of Erdős–Rényi graphs across sizes and densities.

use cacose::analysis::{scalability_study, ScalabilityConfig};

fn main() -> cacose::Result<()> {
    let config = ScalabilityConfig {
        sizes: vec![100, 1000, 10_000],
        densities: vec![0.01, 0.05, 0.10, 0.25, 0.50],
        ..ScalabilityConfig::default()
    };
    for r in scalability_study(&config)? {
        match &r.skipped {
            Some(why) => println!("n {:>6}  p {:.2}  skipped: {why}", r.n, r.p),
            None => println!(
                "n {:>6}  p {:.2}  edges {:>9}  max degree {:>5}  k_max {:>5}  {:.3}s",
                r.n,
                r.p,
                r.edges.unwrap(),
                r.max_degree.unwrap(),
                r.k_max.unwrap(),
                r.elapsed_secs
            ),
        }
    }
    Ok(())
}
