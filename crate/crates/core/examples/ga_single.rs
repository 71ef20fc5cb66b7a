//! One GA run on an all-ones grid, with its per-generation history.

use matdom::ga::{run, GaConfig, RunHistory};
use matdom::{Dims, Instance};

pub fn run_example(n: usize, generations: usize) -> matdom::Result<RunHistory> {
    let grid = Instance::ones(Dims::square(n)?);
    let cfg = GaConfig {
        generations,
        seed: 42,
        ..GaConfig::default()
    };
    run(&grid, &cfg)
}

#[allow(dead_code)]
fn main() -> matdom::Result<()> {
    let h = run_example(12, 200)?;
    for r in h.records.iter().step_by(20) {
        println!(
            "gen {:>3}  best {:>3}  mean {:>8.2}",
            r.generation, r.best_fitness, r.mean_fitness
        );
    }
    let fb = h.best.fitness;
    println!(
        "best: influence {} penalty {} fitness {} after {} evaluations",
        fb.influence, fb.penalty, fb.fitness, h.evaluations
    );
    println!("{:?}", h.best.genome.to_placement().coords());
    Ok(())
}
