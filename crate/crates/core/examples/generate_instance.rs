//! Seeded random instances and the text format they round-trip through.

use matdom::generate::{random_instance, GenSpec};
use matdom::io::{format_instance, parse_instance};

pub fn run_example() -> matdom::Result<String> {
    let spec = GenSpec {
        rows: 6,
        cols: 8,
        density: 0.4,
        seed: 7,
    };
    let instance = random_instance(&spec)?;
    let text = format_instance(&instance);

    // same seed, same matrix
    assert_eq!(random_instance(&spec)?, instance);
    assert_eq!(parse_instance(&text)?, instance);
    Ok(format!(
        "{} ones out of {}\n{text}",
        instance.ones_count(),
        instance.dims().cells()
    ))
}

#[allow(dead_code)]
fn main() -> matdom::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
