//! Occupancy matrices, the row/column penalty, influence and fitness.

use crate::coverage::{self, adjacency_count_sparse};
use crate::error::{Error, Result};
use crate::types::{Dims, DominationModel, Instance, Placement};

/// Weight applied to each row or column whose dominator count differs from one.
pub const PENALTY_WEIGHT: u64 = 10;

/// Influence `I`, penalty `P` and fitness `f = I - P` of one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FitnessBreakdown {
    pub influence: u64,
    pub penalty: u64,
    pub fitness: i64,
}

impl FitnessBreakdown {
    pub fn new(influence: u64, penalty: u64) -> Self {
        FitnessBreakdown {
            influence,
            penalty,
            fitness: influence as i64 - penalty as i64,
        }
    }
}

/// Materialises the 0/1 occupancy matrix `S` of a placement.
pub fn occupancy(placement: &Placement, dims: Dims) -> Result<Vec<Vec<u8>>> {
    placement.check_bounds(dims)?;
    let mut s = vec![vec![0u8; dims.cols]; dims.rows];
    for (i, j) in placement.iter() {
        s[i][j] = 1;
    }
    Ok(s)
}

/// `10 * (#rows with sum != 1 + #columns with sum != 1)`.
pub fn penalty(s: &[Vec<u8>]) -> Result<u64> {
    let rows = s.len();
    let cols = s.first().map_or(0, Vec::len);
    let mut col_sums = vec![0usize; cols];
    let mut bad = 0u64;
    for (i, row) in s.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::validation(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        let mut sum = 0usize;
        for (j, &v) in row.iter().enumerate() {
            match v {
                0 => {}
                1 => {
                    sum += 1;
                    col_sums[j] += 1;
                }
                value => {
                    return Err(Error::NonBinary {
                        row: i,
                        col: j,
                        value,
                    })
                }
            }
        }
        bad += u64::from(sum != 1);
    }
    if rows == 0 {
        return Ok(0);
    }
    bad += col_sums.iter().filter(|&&c| c != 1).count() as u64;
    Ok(PENALTY_WEIGHT * bad)
}

/// Same value as `penalty(occupancy(..))`, computed from the coordinates directly.
pub(crate) fn placement_penalty(
    dims: Dims,
    dominators: impl Iterator<Item = (usize, usize)>,
) -> u64 {
    let mut row_counts = vec![0u32; dims.rows];
    let mut col_counts = vec![0u32; dims.cols];
    for (i, j) in dominators {
        row_counts[i] += 1;
        col_counts[j] += 1;
    }
    let bad = row_counts
        .iter()
        .chain(&col_counts)
        .filter(|&&c| c != 1)
        .count() as u64;
    PENALTY_WEIGHT * bad
}

/// Number of cells the placement dominates under `model`.
///
/// `instance` is required for [`DominationModel::Line`]; adjacency only needs `dims`.
pub fn influence(
    dims: Dims,
    placement: &Placement,
    model: DominationModel,
    instance: Option<&Instance>,
) -> Result<u64> {
    placement.check_bounds(dims)?;
    match model {
        DominationModel::Adjacency => Ok(adjacency_count_sparse(dims, placement.iter()) as u64),
        DominationModel::Line => {
            let instance = instance
                .ok_or_else(|| Error::validation("line domination needs an instance matrix"))?;
            if instance.dims() != dims {
                return Err(Error::validation(format!(
                    "instance is {} but dimensions given are {dims}",
                    instance.dims()
                )));
            }
            Ok(coverage::line_coverage(instance, placement)?.count() as u64)
        }
    }
}

/// Fitness of a placement on `instance` under `model`.
pub fn fitness(
    instance: &Instance,
    placement: &Placement,
    model: DominationModel,
) -> Result<FitnessBreakdown> {
    let dims = instance.dims();
    let i = influence(dims, placement, model, Some(instance))?;
    let p = placement_penalty(dims, placement.iter());
    Ok(FitnessBreakdown::new(i, p))
}
