//! Solvers for the matrix domination problem.
//!
//! A dominator placed in a grid dominates cells under one of two models:
//!
//! * [`DominationModel::Line`]: dominators sit on 1-entries of a binary matrix and
//!   dominate every 1-entry sharing their row or column. This is the decision problem
//!   "is there a set of at most `K` 1-entries dominating all the others", checked by
//!   [`certificate::verify_certificate`].
//! * [`DominationModel::Adjacency`]: a dominator covers its own cell and its four
//!   orthogonal neighbours; every cell of the grid must be covered.
//!
//! The main solver is a permutation-encoded genetic algorithm ([`ga`]) maximising
//! `influence - penalty`, where the penalty charges 10 for every row or column that
//! does not hold exactly one dominator. [`woc`] runs several such populations as a
//! crowd of experts that share a consensus matrix. [`baselines`] provides a greedy
//! heuristic and exhaustive oracles; [`harness`] compares methods at equal evaluation
//! budgets; [`render`] draws placements as SVG or text.

pub mod baselines;
pub mod certificate;
pub mod cli;
pub mod coverage;
pub mod error;
pub mod fitness;
pub mod ga;
pub mod generate;
pub mod harness;
pub mod io;
pub mod render;
pub mod repair;
pub mod types;
pub mod woc;

pub use error::{Error, Result};
pub use fitness::FitnessBreakdown;
pub use types::{Dims, DominationModel, Instance, PermutationPlacement, Placement};
