//! Polynomial-time checking of domination certificates.
//!
//! A certificate is a candidate dominator set `C` together with a bound `K`. It is
//! accepted when `|C| <= K`, every dominator is a legal cell for the model, and every
//! required cell is dominated. The check is a single pass over the grid.

use std::fmt;

use crate::coverage::{self, required_cells};
use crate::types::{DominationModel, Instance, Placement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateQuery {
    pub instance: Instance,
    pub candidate: Placement,
    pub bound: usize,
    pub model: DominationModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    TooManyDominators { size: usize, bound: usize },
    OutOfBounds { row: usize, col: usize },
    OffPattern { row: usize, col: usize },
    Undominated { row: usize, col: usize },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Rejection::TooManyDominators { size, bound } => {
                write!(f, "{size} dominators exceed the bound K = {bound}")
            }
            Rejection::OutOfBounds { row, col } => {
                write!(f, "dominator ({row}, {col}) is out of bounds")
            }
            Rejection::OffPattern { row, col } => {
                write!(f, "dominator ({row}, {col}) is not on a 1-entry")
            }
            Rejection::Undominated { row, col } => write!(f, "cell ({row}, {col}) is undominated"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(Rejection),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => f.write_str("accepted"),
            Verdict::Rejected(r) => write!(f, "rejected: {r}"),
        }
    }
}

pub fn verify_certificate(q: &CertificateQuery) -> Verdict {
    let dims = q.instance.dims();
    if q.candidate.len() > q.bound {
        return Verdict::Rejected(Rejection::TooManyDominators {
            size: q.candidate.len(),
            bound: q.bound,
        });
    }
    if let Some((row, col)) = q.candidate.iter().find(|&c| !dims.contains(c)) {
        return Verdict::Rejected(Rejection::OutOfBounds { row, col });
    }
    let covered = match q.model {
        DominationModel::Adjacency => coverage::adjacency_coverage(dims, &q.candidate),
        DominationModel::Line => {
            if let Some((row, col)) = q.candidate.iter().find(|&(i, j)| !q.instance.get(i, j)) {
                return Verdict::Rejected(Rejection::OffPattern { row, col });
            }
            coverage::line_coverage(&q.instance, &q.candidate)
        }
    }
    .expect("bounds and pattern were checked above");
    if covered.count() == required_cells(&q.instance, q.model) {
        return Verdict::Accepted;
    }
    let first = match q.model {
        DominationModel::Adjacency => covered.uncovered().next(),
        DominationModel::Line => q
            .instance
            .one_entries()
            .find(|&(i, j)| !covered.is_covered(i, j)),
    };
    let (row, col) = first.expect("coverage count below requirement implies a gap");
    Verdict::Rejected(Rejection::Undominated { row, col })
}
