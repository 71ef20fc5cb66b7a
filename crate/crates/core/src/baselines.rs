//! Greedy heuristic and exhaustive oracles.
//!
//! The exhaustive searches are exponential. [`OracleBudget`] caps the instance size
//! they accept so they stay at desk scale.

use crate::coverage::adjacency_count_sparse;
use crate::error::{Error, Result};
use crate::types::{Dims, DominationModel, Instance, PermutationPlacement, Placement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Cap on candidate cells for subset enumeration.
    pub max_cells: usize,
    /// Cap on `n` for permutation enumeration.
    pub max_n: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_cells: 25,
            max_n: 8,
        }
    }
}

impl OracleBudget {
    fn validate(&self) -> Result<()> {
        if self.max_cells == 0 || self.max_n == 0 {
            return Err(Error::config("oracle budget caps must be positive"));
        }
        Ok(())
    }
}

/// Repeatedly picks the cell dominating the most still-undominated required cells.
///
/// Ties go to the lexicographically smallest `(row, col)`. Line domination only
/// considers 1-entries as candidates. The result always dominates every required cell.
pub fn greedy_dominate(instance: &Instance, model: DominationModel) -> Placement {
    match model {
        DominationModel::Adjacency => greedy_adjacency(instance.dims()),
        DominationModel::Line => greedy_line(instance),
    }
}

fn greedy_adjacency(dims: Dims) -> Placement {
    let mut covered = vec![false; dims.cells()];
    let mut remaining = dims.cells();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let mut best = None;
        let mut best_gain = 0;
        for i in 0..dims.rows {
            for j in 0..dims.cols {
                let gain = dims
                    .plus((i, j))
                    .filter(|&c| !covered[dims.index(c)])
                    .count();
                if gain > best_gain {
                    best_gain = gain;
                    best = Some((i, j));
                }
            }
        }
        let cell = best.expect("an uncovered cell always has positive gain at itself");
        for c in dims.plus(cell) {
            covered[dims.index(c)] = true;
        }
        remaining -= best_gain;
        chosen.push(cell);
    }
    Placement::new(chosen)
}

fn greedy_line(instance: &Instance) -> Placement {
    let dims = instance.dims();
    let mut covered = vec![false; dims.cells()];
    let mut row_open = vec![0usize; dims.rows];
    let mut col_open = vec![0usize; dims.cols];
    for (i, j) in instance.one_entries() {
        row_open[i] += 1;
        col_open[j] += 1;
    }
    let mut remaining = instance.ones_count();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let mut best = None;
        let mut best_gain = 0;
        for (i, j) in instance.one_entries() {
            let gain = row_open[i] + col_open[j] - usize::from(!covered[dims.index((i, j))]);
            if gain > best_gain {
                best_gain = gain;
                best = Some((i, j));
            }
        }
        let (r, c) = best.expect("an uncovered 1-entry dominates itself");
        let newly: Vec<_> = (0..dims.cols)
            .map(|j| (r, j))
            .chain((0..dims.rows).map(|i| (i, c)))
            .filter(|&(i, j)| instance.get(i, j) && !covered[dims.index((i, j))])
            .collect();
        for (i, j) in newly {
            let k = dims.index((i, j));
            if !covered[k] {
                covered[k] = true;
                row_open[i] -= 1;
                col_open[j] -= 1;
                remaining -= 1;
            }
        }
        chosen.push((r, c));
    }
    Placement::new(chosen)
}

/// Fixed-width bitset over the required cells.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn zero(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    fn or_into(&self, other: &Bits, out: &mut Bits) {
        for ((o, a), b) in out.0.iter_mut().zip(&self.0).zip(&other.0) {
            *o = a | b;
        }
    }
}

type Cell = (usize, usize);

/// Minimum-cardinality fully dominating placement, found by enumerating candidate
/// subsets by size and then lexicographically. The first feasible subset is returned,
/// so among minimum solutions it is the lexicographically least.
pub fn exact_min_dominating(
    instance: &Instance,
    model: DominationModel,
    budget: OracleBudget,
) -> Result<Placement> {
    budget.validate()?;
    let dims = instance.dims();
    // required cells are indexed 0..required.len(); candidates carry their cover sets
    let (candidates, required): (Vec<Cell>, Vec<Cell>) = match model {
        DominationModel::Adjacency => {
            let all: Vec<_> = (0..dims.rows)
                .flat_map(|i| (0..dims.cols).map(move |j| (i, j)))
                .collect();
            (all.clone(), all)
        }
        DominationModel::Line => {
            let ones: Vec<_> = instance.one_entries().collect();
            (ones.clone(), ones)
        }
    };
    if candidates.len() > budget.max_cells {
        return Err(Error::Budget {
            what: match model {
                DominationModel::Adjacency => "grid cells",
                DominationModel::Line => "1-entries",
            },
            actual: candidates.len(),
            limit: budget.max_cells,
        });
    }
    let mut slot = vec![usize::MAX; dims.cells()];
    for (k, &c) in required.iter().enumerate() {
        slot[dims.index(c)] = k;
    }
    let covers: Vec<Bits> = candidates
        .iter()
        .map(|&(r, c)| {
            let mut b = Bits::zero(required.len());
            let cells: Vec<(usize, usize)> = match model {
                DominationModel::Adjacency => dims.plus((r, c)).collect(),
                DominationModel::Line => (0..dims.cols)
                    .map(|j| (r, j))
                    .chain((0..dims.rows).map(|i| (i, c)))
                    .collect(),
            };
            for cell in cells {
                let k = slot[dims.index(cell)];
                if k != usize::MAX {
                    b.set(k);
                }
            }
            b
        })
        .collect();
    let mut full = Bits::zero(required.len());
    for k in 0..required.len() {
        full.set(k);
    }

    for size in 0..=candidates.len() {
        let mut stack = vec![Bits::zero(required.len()); size + 1];
        let mut picked = Vec::with_capacity(size);
        if search(&covers, &full, size, 0, &mut stack, &mut picked) {
            return Ok(Placement::new(picked.into_iter().map(|k| candidates[k])));
        }
    }
    unreachable!("selecting every candidate dominates all required cells")
}

/// Depth-first enumeration of `size`-subsets in lexicographic order.
fn search(
    covers: &[Bits],
    full: &Bits,
    size: usize,
    start: usize,
    stack: &mut [Bits],
    picked: &mut Vec<usize>,
) -> bool {
    let depth = picked.len();
    if depth == size {
        return stack[depth].0 == full.0;
    }
    let need = size - depth;
    if start + need > covers.len() {
        return false;
    }
    for k in start..=covers.len() - need {
        let (lo, hi) = stack.split_at_mut(depth + 1);
        lo[depth].or_into(&covers[k], &mut hi[0]);
        picked.push(k);
        if search(covers, full, size, k + 1, stack, picked) {
            return true;
        }
        picked.pop();
    }
    false
}

/// Enumerates all `n!` permutations in lexicographic order and returns the first one
/// with maximal adjacency coverage, together with that coverage.
pub fn exact_best_permutation(
    n: usize,
    budget: OracleBudget,
) -> Result<(PermutationPlacement, usize)> {
    budget.validate()?;
    if n > budget.max_n {
        return Err(Error::Budget {
            what: "permutation order",
            actual: n,
            limit: budget.max_n,
        });
    }
    let dims = Dims::square(n)?;
    let mut p: Vec<usize> = (0..n).collect();
    let mut best = p.clone();
    let mut best_cov = 0;
    loop {
        let cov = adjacency_count_sparse(dims, p.iter().copied().enumerate());
        if cov > best_cov {
            best_cov = cov;
            best.clone_from(&p);
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    Ok((PermutationPlacement::new_unchecked(best), best_cov))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("p[i+1] > p[i]");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{verify_certificate, CertificateQuery};

    fn grid(n: usize) -> Instance {
        Instance::ones(Dims::square(n).unwrap())
    }

    #[test]
    fn greedy_small_grids() {
        let adj = DominationModel::Adjacency;
        assert_eq!(greedy_dominate(&grid(1), adj).coords(), &[(0, 0)]);
        assert_eq!(
            greedy_dominate(&grid(3), adj).coords(),
            &[(0, 1), (1, 1), (2, 1)]
        );
        assert_eq!(greedy_dominate(&grid(2), adj).coords(), &[(0, 0), (0, 1)]);
    }

    #[test]
    fn greedy_line_identity_takes_diagonal() {
        let id = Instance::identity(4).unwrap();
        assert_eq!(greedy_dominate(&id, DominationModel::Line).len(), 4);
        let empty = Instance::zeros(Dims::square(3).unwrap());
        assert!(greedy_dominate(&empty, DominationModel::Line).is_empty());
    }

    #[test]
    fn greedy_output_verifies() {
        let inst = crate::generate::random_instance(&crate::generate::GenSpec {
            rows: 6,
            cols: 7,
            density: 0.4,
            seed: 11,
        })
        .unwrap();
        for model in [DominationModel::Line, DominationModel::Adjacency] {
            let p = greedy_dominate(&inst, model);
            let q = CertificateQuery {
                instance: inst.clone(),
                bound: p.len(),
                candidate: p,
                model,
            };
            assert!(verify_certificate(&q).is_accepted());
        }
    }

    #[test]
    fn exact_small_grids() {
        let b = OracleBudget::default();
        let adj = DominationModel::Adjacency;
        assert_eq!(exact_min_dominating(&grid(2), adj, b).unwrap().len(), 2);
        assert_eq!(exact_min_dominating(&grid(3), adj, b).unwrap().len(), 3);
        let id = Instance::identity(3).unwrap();
        assert_eq!(
            exact_min_dominating(&id, DominationModel::Line, b)
                .unwrap()
                .len(),
            3
        );
        let empty = Instance::zeros(Dims::square(2).unwrap());
        assert!(exact_min_dominating(&empty, DominationModel::Line, b)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn exact_budget_errors() {
        let b = OracleBudget::default();
        assert!(matches!(
            exact_min_dominating(&grid(6), DominationModel::Adjacency, b),
            Err(Error::Budget {
                actual: 36,
                limit: 25,
                ..
            })
        ));
        assert!(matches!(
            exact_best_permutation(9, b),
            Err(Error::Budget { .. })
        ));
        let zero = OracleBudget {
            max_cells: 0,
            max_n: 1,
        };
        assert!(exact_best_permutation(1, zero).is_err());
    }

    #[test]
    fn best_permutation_small() {
        let b = OracleBudget::default();
        assert_eq!(exact_best_permutation(1, b).unwrap().1, 1);
        assert_eq!(exact_best_permutation(2, b).unwrap().1, 4);
        let (p, cov) = exact_best_permutation(3, b).unwrap();
        assert_eq!(cov, 9);
        // (1, 2, 0) is also optimal; (0, 2, 1) is the lexicographically least
        assert_eq!(p.as_slice(), &[0, 2, 1]);
    }

    #[test]
    fn next_permutation_counts() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
