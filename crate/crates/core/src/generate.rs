//! Seeded generation of instances, placements and permutations.
//!
//! Every generator draws from a [`ChaCha8Rng`] seeded with the 64-bit seed via
//! `SeedableRng::seed_from_u64`, so outputs are pure functions of their arguments.
//! Independent derived streams use [`mix_seed`].

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{Dims, Instance, PermutationPlacement, Placement};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `master`: one splitmix64 round over
/// `master + (index + 1) * golden_gamma`.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub rows: usize,
    pub cols: usize,
    pub density: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<Dims> {
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::validation(format!(
                "density must lie in [0, 1], got {}",
                self.density
            )));
        }
        Dims::new(self.rows, self.cols)
    }
}

/// Each entry is 1 independently with probability `density`.
pub fn random_instance(spec: &GenSpec) -> Result<Instance> {
    let dims = spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    Ok(Instance::from_fn(dims, |_, _| rng.gen_bool(spec.density)))
}

/// Uniform permutation by Fisher-Yates shuffle.
pub fn random_permutation(n: usize, seed: u64) -> Result<PermutationPlacement> {
    permutation_with(n, &mut rng_from_seed(seed))
}

pub(crate) fn permutation_with<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<PermutationPlacement> {
    if n == 0 {
        return Err(Error::validation("permutation order must be at least 1"));
    }
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    Ok(PermutationPlacement::new_unchecked(p))
}

/// `k` distinct cells drawn uniformly without replacement.
pub fn random_placement(rows: usize, cols: usize, k: usize, seed: u64) -> Result<Placement> {
    placement_with(Dims::new(rows, cols)?, k, &mut rng_from_seed(seed))
}

pub(crate) fn placement_with<R: Rng + ?Sized>(
    dims: Dims,
    k: usize,
    rng: &mut R,
) -> Result<Placement> {
    let cells = dims.cells();
    if k > cells {
        return Err(Error::validation(format!(
            "cannot place {k} dominators on {cells} cells"
        )));
    }
    Ok(index::sample(rng, cells, k)
        .into_iter()
        .map(|x| (x / dims.cols, x % dims.cols))
        .collect())
}
