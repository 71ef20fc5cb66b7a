//! GA against GA with crowd aggregation on equal evaluation budgets.
//!
//! ```text
//! cargo run --release --example benchmark -- [n] [seeds] [budget]
//! ```

use matdom::harness::{run_benchmark, summarize, BenchSpec, Method, Summary};

pub fn run_example(n: usize, seeds: u64, budget: u64) -> matdom::Result<Summary> {
    let spec = BenchSpec {
        sizes: vec![n],
        methods: vec![Method::Greedy, Method::Ga, Method::GaWoc],
        seeds: (0..seeds).collect(),
        evaluation_budget: budget,
        record_timing: false,
        ..BenchSpec::default()
    };
    summarize(&run_benchmark(&spec)?)
}

#[allow(dead_code)]
fn main() -> matdom::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let n = args.first().copied().unwrap_or(20) as usize;
    let summary = run_example(
        n,
        args.get(1).copied().unwrap_or(30),
        args.get(2).copied().unwrap_or(50_000),
    )?;
    print!("{summary}");
    Ok(())
}
