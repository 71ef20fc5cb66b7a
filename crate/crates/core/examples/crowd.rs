//! Several seeded experts pooling their elites into a consensus matrix.

use matdom::ga::GaConfig;
use matdom::woc::{run_crowd, BestSource, CrowdConfig, CrowdHistory};
use matdom::{Dims, Instance};

pub fn run_example(n: usize, generations: usize) -> matdom::Result<CrowdHistory> {
    let grid = Instance::ones(Dims::square(n)?);
    let cfg = CrowdConfig {
        ga: GaConfig {
            generations,
            ..GaConfig::default()
        },
        master_seed: 2024,
        ..CrowdConfig::default()
    };
    run_crowd(&grid, &cfg)
}

#[allow(dead_code)]
fn main() -> matdom::Result<()> {
    let h = run_example(10, 100)?;
    for (i, e) in h.experts.iter().enumerate() {
        println!("expert {i}: best {}", e.best.fitness.fitness);
    }
    println!("aggregate: {}", h.aggregate.fitness.fitness);
    let from = match h.best_source {
        BestSource::Expert(i) => format!("expert {i}"),
        BestSource::Aggregate => "the aggregate".to_string(),
    };
    println!(
        "best {} from {from}, {} barriers, {} evaluations",
        h.best.fitness.fitness, h.barriers, h.evaluations
    );
    Ok(())
}
