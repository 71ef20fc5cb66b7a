//! Domain types shared by every solver: the binary instance matrix, dominator
//! placements in free and permutation form, and the domination model switch.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Grid dimensions: `rows` x `cols`, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub rows: usize,
    pub cols: usize,
}

impl Dims {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::validation(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(Dims { rows, cols })
    }

    pub fn square(n: usize) -> Result<Self> {
        Dims::new(n, n)
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn contains(&self, (row, col): (usize, usize)) -> bool {
        row < self.rows && col < self.cols
    }

    pub fn check(&self, (row, col): (usize, usize)) -> Result<()> {
        if self.contains((row, col)) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    #[inline]
    pub(crate) fn index(&self, (row, col): (usize, usize)) -> usize {
        row * self.cols + col
    }

    /// The cell itself followed by its in-bounds orthogonal neighbours.
    pub(crate) fn plus(&self, (row, col): (usize, usize)) -> impl Iterator<Item = (usize, usize)> {
        let dims = *self;
        let up = row.checked_sub(1).map(|r| (r, col));
        let down = (row + 1 < dims.rows).then_some((row + 1, col));
        let left = col.checked_sub(1).map(|c| (row, c));
        let right = (col + 1 < dims.cols).then_some((row, col + 1));
        std::iter::once((row, col)).chain([up, down, left, right].into_iter().flatten())
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// An `n x m` binary matrix: the pattern of 1-entries to dominate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    dims: Dims,
    entries: Vec<bool>,
}

impl Instance {
    /// Builds an instance from row vectors, rejecting ragged rows and non-binary values.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let dims = Dims::new(n, m)?;
        let mut entries = Vec::with_capacity(dims.cells());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::validation(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for (j, &value) in row.iter().enumerate() {
                match value {
                    0 => entries.push(false),
                    1 => entries.push(true),
                    _ => {
                        return Err(Error::NonBinary {
                            row: i,
                            col: j,
                            value,
                        })
                    }
                }
            }
        }
        Ok(Instance { dims, entries })
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut entries = Vec::with_capacity(dims.cells());
        for i in 0..dims.rows {
            for j in 0..dims.cols {
                entries.push(f(i, j));
            }
        }
        Instance { dims, entries }
    }

    pub fn ones(dims: Dims) -> Self {
        Instance {
            dims,
            entries: vec![true; dims.cells()],
        }
    }

    pub fn zeros(dims: Dims) -> Self {
        Instance {
            dims,
            entries: vec![false; dims.cells()],
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Instance::from_fn(Dims::square(n)?, |i, j| i == j))
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn rows(&self) -> usize {
        self.dims.rows
    }

    pub fn cols(&self) -> usize {
        self.dims.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.entries[self.dims.index((row, col))]
    }

    pub fn ones_count(&self) -> usize {
        self.entries.iter().filter(|&&e| e).count()
    }

    /// Coordinates of all 1-entries in row-major order.
    pub fn one_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.dims.cols;
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .map(move |(k, _)| (k / cols, k % cols))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.entries
            .chunks(self.dims.cols)
            .map(|row| row.iter().map(|&e| u8::from(e)).collect())
            .collect()
    }
}

/// A set of dominator coordinates kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    coords: Vec<(usize, usize)>,
}

impl Placement {
    pub fn new(coords: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut coords: Vec<_> = coords.into_iter().collect();
        coords.sort_unstable();
        coords.dedup();
        Placement { coords }
    }

    pub fn empty() -> Self {
        Placement::default()
    }

    pub fn coords(&self) -> &[(usize, usize)] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn contains(&self, cell: (usize, usize)) -> bool {
        self.coords.binary_search(&cell).is_ok()
    }

    pub fn check_bounds(&self, dims: Dims) -> Result<()> {
        self.coords.iter().try_for_each(|&c| dims.check(c))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.coords.iter().copied()
    }
}

impl FromIterator<(usize, usize)> for Placement {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        Placement::new(iter)
    }
}

/// One dominator per row and per column: row `i` holds its dominator at column `p[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermutationPlacement {
    p: Vec<usize>,
}

impl PermutationPlacement {
    pub fn new(p: Vec<usize>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::validation(
                "permutation must have at least one entry",
            ));
        }
        let n = p.len();
        let mut seen = vec![false; n];
        for (i, &c) in p.iter().enumerate() {
            if c >= n {
                return Err(Error::validation(format!(
                    "entry p[{i}] = {c} is not below n = {n}"
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::validation(format!("column {c} is used twice")));
            }
        }
        Ok(PermutationPlacement { p })
    }

    pub(crate) fn new_unchecked(p: Vec<usize>) -> Self {
        debug_assert!(PermutationPlacement::new(p.clone()).is_ok());
        PermutationPlacement { p }
    }

    pub fn identity(n: usize) -> Result<Self> {
        PermutationPlacement::new((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.p
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.p
    }

    pub fn column_of(&self, row: usize) -> usize {
        self.p[row]
    }

    pub(crate) fn swap(&mut self, i: usize, j: usize) {
        self.p.swap(i, j);
    }

    pub fn to_placement(&self) -> Placement {
        Placement::new(self.p.iter().enumerate().map(|(i, &c)| (i, c)))
    }

    /// Reads a placement back as a permutation, if it is one on an `n x n` grid.
    pub fn from_placement(placement: &Placement, n: usize) -> Result<Self> {
        if placement.len() != n {
            return Err(Error::validation(format!(
                "placement has {} dominators, a permutation of order {n} needs {n}",
                placement.len()
            )));
        }
        let mut p = vec![usize::MAX; n];
        for (i, j) in placement.iter() {
            if i >= n || p[i] != usize::MAX {
                return Err(Error::validation(format!(
                    "row {i} does not hold exactly one dominator"
                )));
            }
            p[i] = j;
        }
        PermutationPlacement::new(p)
    }
}

/// Which cells a dominator covers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum DominationModel {
    /// Dominators sit on 1-entries and cover every 1-entry sharing their row or column.
    Line,
    /// Dominators cover their own cell and its four orthogonal neighbours.
    #[default]
    Adjacency,
}

impl DominationModel {
    pub fn name(&self) -> &'static str {
        match self {
            DominationModel::Line => "line",
            DominationModel::Adjacency => "adjacency",
        }
    }
}

impl fmt::Display for DominationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DominationModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "line" => Ok(DominationModel::Line),
            "adjacency" => Ok(DominationModel::Adjacency),
            other => Err(Error::validation(format!(
                "unknown domination model '{other}' (expected line or adjacency)"
            ))),
        }
    }
}
