//! Greedy cover against the exhaustive optimum on small grids.

use matdom::baselines::{
    exact_best_permutation, exact_min_dominating, greedy_dominate, OracleBudget,
};
use matdom::{Dims, DominationModel, Instance};

pub fn run_example() -> matdom::Result<Vec<(usize, usize, usize)>> {
    let mut table = Vec::new();
    for n in 2..=5 {
        let grid = Instance::ones(Dims::square(n)?);
        let greedy = greedy_dominate(&grid, DominationModel::Adjacency);
        let exact =
            exact_min_dominating(&grid, DominationModel::Adjacency, OracleBudget::default())?;
        assert!(exact.len() <= greedy.len());
        table.push((n, greedy.len(), exact.len()));
    }
    Ok(table)
}

#[allow(dead_code)]
fn main() -> matdom::Result<()> {
    println!("n  greedy  exact");
    for (n, g, e) in run_example()? {
        println!("{n}  {g:>6}  {e:>5}");
    }
    let (p, covered) = exact_best_permutation(5, OracleBudget::default())?;
    println!(
        "best one-per-row-and-column layout at n=5: {:?} covers {covered}",
        p.as_slice()
    );
    Ok(())
}
