//! Variation operators for both genome encodings.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::types::{PermutationPlacement, Placement};
use crate::woc::ConsensusMatrix;

use super::{Genome, Individual, Objective};

/// Cycle crossover.
///
/// Positions split into cycles of the pair `(a, b)`; each cycle is copied wholesale
/// from `a` or from `b` on a fair coin flip, in order of the cycle's first position.
/// Every child position therefore holds the value one of the parents had there.
pub fn crossover_permutation<R: Rng + ?Sized>(
    a: &PermutationPlacement,
    b: &PermutationPlacement,
    rng: &mut R,
) -> Result<PermutationPlacement> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::validation(format!(
            "parents have different lengths {n} and {}",
            b.len()
        )));
    }
    let (a, b) = (a.as_slice(), b.as_slice());
    let mut pos_in_a = vec![0; n];
    for (i, &v) in a.iter().enumerate() {
        pos_in_a[v] = i;
    }
    let mut child = vec![usize::MAX; n];
    for start in 0..n {
        if child[start] != usize::MAX {
            continue;
        }
        let donor = if rng.gen_bool(0.5) { a } else { b };
        let mut i = start;
        loop {
            child[i] = donor[i];
            i = pos_in_a[b[i]];
            if i == start {
                break;
            }
        }
    }
    Ok(PermutationPlacement::new_unchecked(child))
}

/// Crossover for unconstrained placements: the child draws as many distinct cells as
/// the first parent holds, uniformly from the union of both parents' cells.
pub fn crossover_free<R: Rng + ?Sized>(a: &Placement, b: &Placement, rng: &mut R) -> Placement {
    let pool = Placement::new(a.iter().chain(b.iter()));
    let k = a.len().min(pool.len());
    index::sample(rng, pool.len(), k)
        .into_iter()
        .map(|x| pool.coords()[x])
        .collect()
}

/// Applies one mutation with probability `rate` and returns the re-evaluated result.
///
/// Permutations swap two rows' columns. With a consensus matrix and `bias > 0`, the
/// swap is chosen with probability `bias` to maximise the gain in consensus alignment
/// (ties to the lexicographically first pair), otherwise uniformly. Free placements
/// move one dominator to an empty cell; the biased variant moves the least-endorsed
/// dominator to the most-endorsed empty cell.
pub fn mutate<R: Rng + ?Sized>(
    individual: &Individual,
    rate: f64,
    rng: &mut R,
    consensus: Option<&ConsensusMatrix>,
    bias: f64,
    objective: &Objective,
) -> Individual {
    let mut genome = individual.genome.clone();
    if mutate_genome(&mut genome, rate, rng, consensus, bias, objective) {
        Individual::evaluated(genome, objective)
    } else {
        individual.clone()
    }
}

pub(crate) fn mutate_genome<R: Rng + ?Sized>(
    genome: &mut Genome,
    rate: f64,
    rng: &mut R,
    consensus: Option<&ConsensusMatrix>,
    bias: f64,
    objective: &Objective,
) -> bool {
    if !rng.gen_bool(rate) {
        return false;
    }
    let guide = consensus.filter(|_| bias > 0.0);
    match genome {
        Genome::Permutation(p) => {
            let n = p.len();
            if n < 2 {
                return false;
            }
            let (i, j) = match guide {
                Some(f) if rng.gen_bool(bias) => best_consensus_swap(p, f),
                _ => {
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    (i, j)
                }
            };
            p.swap(i, j);
            true
        }
        Genome::Free(placement) => {
            let dims = objective.dims();
            if placement.is_empty() || placement.len() == dims.cells() {
                return false;
            }
            let (from, to) = match guide {
                Some(f) if rng.gen_bool(bias) => consensus_move(placement, f),
                _ => {
                    let from = placement.coords()[rng.gen_range(0..placement.len())];
                    let empty = dims.cells() - placement.len();
                    let mut nth = rng.gen_range(0..empty);
                    let mut to = (0, 0);
                    'scan: for i in 0..dims.rows {
                        for j in 0..dims.cols {
                            if !placement.contains((i, j)) {
                                if nth == 0 {
                                    to = (i, j);
                                    break 'scan;
                                }
                                nth -= 1;
                            }
                        }
                    }
                    (from, to)
                }
            };
            *placement = placement
                .iter()
                .filter(|&c| c != from)
                .chain([to])
                .collect();
            true
        }
    }
}

/// Pair `(i, j)`, `i < j`, whose swap raises `sum F[i][p[i]]` the most.
fn best_consensus_swap(p: &PermutationPlacement, f: &ConsensusMatrix) -> (usize, usize) {
    let n = p.len();
    let mut best = (0, 1);
    let mut best_gain = i64::MIN;
    // counts share one denominator, so integer gains compare exactly
    for i in 0..n {
        let (ci, stay_i) = (p.column_of(i), i64::from(f.count(i, p.column_of(i))));
        for j in i + 1..n {
            let cj = p.column_of(j);
            let gain = i64::from(f.count(i, cj)) + i64::from(f.count(j, ci))
                - stay_i
                - i64::from(f.count(j, cj));
            if gain > best_gain {
                best_gain = gain;
                best = (i, j);
            }
        }
    }
    best
}

fn consensus_move(placement: &Placement, f: &ConsensusMatrix) -> ((usize, usize), (usize, usize)) {
    let from = placement
        .iter()
        .min_by_key(|&(i, j)| (f.count(i, j), i, j))
        .expect("placement is non-empty");
    let mut to = None;
    let mut best = 0;
    for i in 0..f.rows() {
        for j in 0..f.cols() {
            if placement.contains((i, j)) {
                continue;
            }
            let c = f.count(i, j);
            if to.is_none() || c > best {
                best = c;
                to = Some((i, j));
            }
        }
    }
    (from, to.expect("placement leaves an empty cell"))
}
