//! Terminal and SVG pictures of a placement.

use matdom::baselines::greedy_dominate;
use matdom::render::{render_ascii, render_svg, RenderSpec};
use matdom::{Dims, DominationModel, Instance};

pub fn run_example() -> matdom::Result<(String, String)> {
    let grid = Instance::ones(Dims::new(5, 7)?);
    let placement = greedy_dominate(&grid, DominationModel::Adjacency);
    let ascii = render_ascii(&grid, &placement, DominationModel::Adjacency)?;
    let spec = RenderSpec {
        show_coverage: true,
        ..RenderSpec::default()
    };
    let svg = render_svg(&grid, &placement, DominationModel::Adjacency, &spec)?;
    Ok((ascii, svg))
}

#[allow(dead_code)]
fn main() -> matdom::Result<()> {
    let (ascii, svg) = run_example()?;
    print!("{ascii}");
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, svg)?,
        None => eprintln!("pass a path to also write the SVG"),
    }
    Ok(())
}
