//! Coverage under the two domination models.

use crate::error::{Error, Result};
use crate::types::{Dims, DominationModel, Instance, Placement};

/// Which cells a placement dominates, plus the number of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    dims: Dims,
    mask: Vec<bool>,
    count: usize,
}

impl Coverage {
    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_covered(&self, row: usize, col: usize) -> bool {
        self.mask[self.dims.index((row, col))]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Cells left uncovered, in row-major order.
    pub fn uncovered(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.dims.cols;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(move |(k, _)| (k / cols, k % cols))
    }
}

/// Cell `(i, j)` is covered when it or one of its orthogonal neighbours holds a dominator.
pub fn adjacency_coverage(dims: Dims, placement: &Placement) -> Result<Coverage> {
    placement.check_bounds(dims)?;
    let mut mask = vec![false; dims.cells()];
    let mut count = 0;
    for cell in placement.iter() {
        for c in dims.plus(cell) {
            let k = dims.index(c);
            if !mask[k] {
                mask[k] = true;
                count += 1;
            }
        }
    }
    Ok(Coverage { dims, mask, count })
}

/// A 1-entry is covered when some dominator shares its row or column.
///
/// Only 1-entries can appear in the mask; every dominator must itself sit on a 1-entry.
pub fn line_coverage(instance: &Instance, placement: &Placement) -> Result<Coverage> {
    let dims = instance.dims();
    placement.check_bounds(dims)?;
    if let Some((row, col)) = placement.iter().find(|&(i, j)| !instance.get(i, j)) {
        return Err(Error::ModelViolation { row, col });
    }
    Ok(line_mask(instance, placement.iter()))
}

pub(crate) fn line_mask(
    instance: &Instance,
    dominators: impl Iterator<Item = (usize, usize)>,
) -> Coverage {
    let dims = instance.dims();
    let mut rows = vec![false; dims.rows];
    let mut cols = vec![false; dims.cols];
    for (i, j) in dominators {
        rows[i] = true;
        cols[j] = true;
    }
    let mut mask = vec![false; dims.cells()];
    let mut count = 0;
    for (i, j) in instance.one_entries() {
        if rows[i] || cols[j] {
            mask[dims.index((i, j))] = true;
            count += 1;
        }
    }
    Coverage { dims, mask, count }
}

/// Coverage under `model`. Adjacency ignores the instance entries: every cell counts.
pub fn coverage(
    instance: &Instance,
    placement: &Placement,
    model: DominationModel,
) -> Result<Coverage> {
    match model {
        DominationModel::Adjacency => adjacency_coverage(instance.dims(), placement),
        DominationModel::Line => line_coverage(instance, placement),
    }
}

/// Cells a model requires to be dominated.
pub fn required_cells(instance: &Instance, model: DominationModel) -> usize {
    match model {
        DominationModel::Adjacency => instance.dims().cells(),
        DominationModel::Line => instance.ones_count(),
    }
}

/// Adjacency cover count without materialising the full grid mask.
///
/// Costs `O(k log k)` in the number of dominators, so it stays cheap on grids far
/// larger than the placement. Coordinates must already be in bounds.
pub(crate) fn adjacency_count_sparse(
    dims: Dims,
    dominators: impl Iterator<Item = (usize, usize)>,
) -> usize {
    const WORDS: usize = 64;
    if dims.cells() <= WORDS * 64 {
        let mut bits = [0u64; WORDS];
        for c in dominators.flat_map(|c| dims.plus(c)) {
            let k = dims.index(c);
            bits[k / 64] |= 1 << (k % 64);
        }
        return bits.iter().map(|w| w.count_ones() as usize).sum();
    }
    let mut cells: Vec<usize> = dominators
        .flat_map(|c| dims.plus(c))
        .map(|c| dims.index(c))
        .collect();
    cells.sort_unstable();
    cells.dedup();
    cells.len()
}
