//! Checking a claimed dominating set of size at most K.

use matdom::certificate::{verify_certificate, CertificateQuery, Verdict};
use matdom::{Dims, DominationModel, Instance, Placement};

pub fn run_example() -> matdom::Result<Vec<Verdict>> {
    let grid = Instance::ones(Dims::square(3)?);
    let query = |cells: &[(usize, usize)], bound| CertificateQuery {
        instance: grid.clone(),
        candidate: Placement::new(cells.iter().copied()),
        bound,
        model: DominationModel::Adjacency,
    };

    let verdicts = vec![
        verify_certificate(&query(&[(0, 1), (1, 1), (2, 1)], 3)),
        verify_certificate(&query(&[(0, 1), (1, 1), (2, 1)], 2)),
        verify_certificate(&query(&[(1, 1)], 3)),
        verify_certificate(&query(&[(3, 0)], 3)),
    ];
    Ok(verdicts)
}

#[allow(dead_code)]
fn main() -> matdom::Result<()> {
    for v in run_example()? {
        println!("{v}");
    }
    Ok(())
}
