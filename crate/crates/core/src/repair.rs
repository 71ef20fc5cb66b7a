//! Projection of arbitrary placements onto permutation placements.

use crate::error::{Error, Result};
use crate::types::{PermutationPlacement, Placement};

/// Deterministically turns any placement on an `n x n` grid into a permutation.
///
/// Rows are scanned in order and each keeps its lexicographically first dominator
/// whose column is still free. Rows left empty then take the smallest unused column,
/// again in row order. Cells outside the grid are ignored. A permutation is returned
/// unchanged.
pub fn repair(placement: &Placement, n: usize) -> PermutationPlacement {
    assert!(n > 0, "repair needs a non-empty grid");
    let mut p = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // coords are sorted, so each row's candidates arrive in column order
    for (i, j) in placement.iter() {
        if i < n && j < n && p[i] == usize::MAX && !used[j] {
            p[i] = j;
            used[j] = true;
        }
    }
    fill_free_columns(&mut p, &mut used);
    PermutationPlacement::new_unchecked(p)
}

/// [`repair`] applied to a square occupancy matrix.
pub fn repair_matrix(s: &[Vec<u8>]) -> Result<PermutationPlacement> {
    let n = s.len();
    let mut coords = Vec::new();
    for (i, row) in s.iter().enumerate() {
        if row.len() != n {
            return Err(Error::validation(format!(
                "repair needs a square matrix, row {i} has {} entries for {n} rows",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            match v {
                0 => {}
                1 => coords.push((i, j)),
                value => {
                    return Err(Error::NonBinary {
                        row: i,
                        col: j,
                        value,
                    })
                }
            }
        }
    }
    if n == 0 {
        return Err(Error::validation("repair needs a non-empty matrix"));
    }
    Ok(repair(&Placement::new(coords), n))
}

/// Assigns each unassigned row (`usize::MAX`) the smallest unused column.
pub(crate) fn fill_free_columns(p: &mut [usize], used: &mut [bool]) {
    let mut next_free = 0;
    for slot in p.iter_mut().filter(|s| **s == usize::MAX) {
        while used[next_free] {
            next_free += 1;
        }
        *slot = next_free;
        used[next_free] = true;
    }
}
