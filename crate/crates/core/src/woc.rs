//! Wisdom-of-crowds layer over the genetic algorithm.
//!
//! A crowd is `E` expert populations, each an ordinary [`Evolver`] with its own seed
//! stream `mix_seed(master, i)` and a jittered mutation rate. Experts evolve in
//! isolation between barriers placed every `aggregation_interval` generations. At a
//! barrier the elites of every expert are pooled into a [`ConsensusMatrix`]: the share
//! of elites holding a dominator at each cell. Until the next barrier that matrix
//! biases each expert's tournament scores and, with probability `bias`, its mutation
//! choices. After the last generation the final consensus is turned into one more
//! candidate by greedy assignment; the crowd answer is the fittest of the expert bests
//! and that aggregate.
//!
//! Experts only exchange immutable snapshots at barriers, so the outcome does not
//! depend on how the thread pool schedules them.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ga::{Evolver, GaConfig, Genome, Individual, Objective, RunHistory, HISTORY_HEADER};
use crate::generate::mix_seed;
use crate::repair::fill_free_columns;
use crate::types::{Dims, Instance, PermutationPlacement, Placement};

/// Per-cell dominator counts over a pool of contributing placements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusMatrix {
    dims: Dims,
    counts: Vec<u32>,
    contributors: u32,
}

impl ConsensusMatrix {
    pub fn from_placements(dims: Dims, elites: &[Placement]) -> Result<Self> {
        if elites.is_empty() {
            return Err(Error::validation("consensus needs at least one elite"));
        }
        for e in elites {
            e.check_bounds(dims)?;
        }
        Ok(Self::tally(dims, elites.iter().map(|e| e.iter())))
    }

    fn tally<I: Iterator<Item = (usize, usize)>>(
        dims: Dims,
        elites: impl Iterator<Item = I>,
    ) -> Self {
        let mut counts = vec![0u32; dims.cells()];
        let mut contributors = 0;
        for cells in elites {
            contributors += 1;
            for c in cells {
                counts[dims.index(c)] += 1;
            }
        }
        ConsensusMatrix {
            dims,
            counts,
            contributors,
        }
    }

    pub(crate) fn from_individuals<'a>(
        dims: Dims,
        elites: impl Iterator<Item = &'a Individual>,
    ) -> Self {
        Self::tally(dims, elites.map(|i| i.genome.cells()))
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

    pub fn contributors(&self) -> u32 {
        self.contributors
    }

    /// Number of contributors with a dominator at `(row, col)`.
    pub fn count(&self, row: usize, col: usize) -> u32 {
        self.counts[self.dims.index((row, col))]
    }

    /// `count / contributors`.
    pub fn frequency(&self, row: usize, col: usize) -> f64 {
        f64::from(self.count(row, col)) / f64::from(self.contributors)
    }

    pub(crate) fn genome_alignment(&self, genome: &Genome) -> f64 {
        let n = genome.len();
        if n == 0 {
            return 0.0;
        }
        let hits: u64 = genome
            .cells()
            .map(|(i, j)| u64::from(self.count(i, j)))
            .sum();
        hits as f64 / (n as f64 * f64::from(self.contributors))
    }
}

/// `F[i][j]` = share of elites with a dominator at `(i, j)`.
pub fn build_consensus(dims: Dims, elites: &[Placement]) -> Result<ConsensusMatrix> {
    ConsensusMatrix::from_placements(dims, elites)
}

/// `(1/n) * sum_i F[i][p[i]]`.
pub fn alignment(individual: &PermutationPlacement, f: &ConsensusMatrix) -> Result<f64> {
    let n = individual.len();
    if f.dims() != Dims::square(n)? {
        return Err(Error::validation(format!(
            "permutation of order {n} against a {} consensus",
            f.dims()
        )));
    }
    Ok(f.genome_alignment(&Genome::Permutation(individual.clone())))
}

/// Greedy assignment on the consensus: take cells by decreasing frequency (ties to
/// the smaller `(row, col)`) while both row and column are free, then give leftover
/// rows the smallest unused column.
pub fn aggregate_solution(f: &ConsensusMatrix) -> Result<PermutationPlacement> {
    let dims = f.dims();
    if !dims.is_square() {
        return Err(Error::validation(format!(
            "aggregation needs a square consensus, got {dims}"
        )));
    }
    let n = dims.rows;
    let mut cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    cells.sort_by_key(|&(i, j)| std::cmp::Reverse(f.count(i, j)));
    let mut p = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut assigned = 0;
    for (i, j) in cells {
        if assigned == n {
            break;
        }
        if p[i] == usize::MAX && !used[j] {
            p[i] = j;
            used[j] = true;
            assigned += 1;
        }
    }
    fill_free_columns(&mut p, &mut used);
    Ok(PermutationPlacement::new_unchecked(p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrowdConfig {
    pub experts: usize,
    /// Template for every expert. Its seed is ignored in favour of the derived streams.
    pub ga: GaConfig,
    pub aggregation_interval: usize,
    pub elite_fraction: f64,
    pub bias: f64,
    /// Expert `i` runs at `mutation_rate * (1 + jitter * s_i)` with
    /// `s = 0, +1, -1, +2, -2, ...`, clamped to `[0, 1]`.
    pub mutation_jitter: f64,
    pub master_seed: u64,
}

impl Default for CrowdConfig {
    fn default() -> Self {
        CrowdConfig {
            experts: 5,
            ga: GaConfig::default(),
            aggregation_interval: 10,
            elite_fraction: 0.2,
            bias: 0.3,
            mutation_jitter: 0.25,
            master_seed: 0,
        }
    }
}

impl CrowdConfig {
    pub fn validate(&self, dims: Dims) -> Result<()> {
        if self.experts == 0 {
            return Err(Error::config("a crowd needs at least one expert"));
        }
        if self.aggregation_interval == 0 {
            return Err(Error::config("aggregation interval must be positive"));
        }
        if !(self.elite_fraction > 0.0 && self.elite_fraction <= 1.0) {
            return Err(Error::config(format!(
                "elite fraction must lie in (0, 1], got {}",
                self.elite_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.bias) {
            return Err(Error::config(format!(
                "bias must lie in [0, 1], got {}",
                self.bias
            )));
        }
        if !(self.mutation_jitter >= 0.0 && self.mutation_jitter.is_finite()) {
            return Err(Error::config(
                "mutation jitter must be a non-negative number",
            ));
        }
        if !dims.is_square() {
            return Err(Error::config(format!(
                "a crowd needs a square instance, got {dims}"
            )));
        }
        self.ga.validate(dims)
    }

    /// The GA configuration expert `i` runs with.
    pub fn expert_config(&self, i: usize) -> GaConfig {
        let step = i.div_ceil(2) as f64;
        let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
        let factor = 1.0 + self.mutation_jitter * sign * step;
        GaConfig {
            seed: mix_seed(self.master_seed, i as u64),
            mutation_rate: (self.ga.mutation_rate * factor).clamp(0.0, 1.0),
            ..self.ga.clone()
        }
    }

    fn elite_count(&self) -> usize {
        ((self.elite_fraction * self.ga.population_size as f64).ceil() as usize)
            .clamp(1, self.ga.population_size)
    }
}

/// Where the crowd's answer came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BestSource {
    Expert(usize),
    Aggregate,
}

#[derive(Debug, Clone)]
pub struct CrowdHistory {
    pub experts: Vec<RunHistory>,
    pub aggregation_interval: usize,
    /// Barriers crossed during the run (the final aggregation is not counted).
    pub barriers: usize,
    pub final_consensus: ConsensusMatrix,
    pub aggregate: Individual,
    pub best: Individual,
    pub best_source: BestSource,
    /// Fitness evaluations spent by the expert populations.
    pub evaluations: u64,
    /// Evaluations spent scoring the aggregate candidate, kept apart from the
    /// population budget.
    pub aggregate_evaluations: u64,
    pub wall: Duration,
}

impl CrowdHistory {
    /// Index of the last barrier a generation was bred after.
    pub fn barrier_of(&self, generation: usize) -> usize {
        generation.saturating_sub(1) / self.aggregation_interval
    }

    /// Per-expert, per-generation CSV prefixed with `expert_id,barrier_index`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("expert_id,barrier_index,{HISTORY_HEADER}\n");
        for (e, h) in self.experts.iter().enumerate() {
            for r in &h.records {
                let _ = writeln!(
                    out,
                    "{e},{},{}",
                    self.barrier_of(r.generation),
                    r.csv_fields()
                );
            }
        }
        out
    }
}

pub fn run_crowd(instance: &Instance, cfg: &CrowdConfig) -> Result<CrowdHistory> {
    let started = Instant::now();
    let dims = instance.dims();
    cfg.validate(dims)?;
    let mut experts = (0..cfg.experts)
        .into_par_iter()
        .map(|i| Evolver::new(instance, cfg.expert_config(i)))
        .collect::<Result<Vec<_>>>()?;

    let elites = cfg.elite_count();
    let consensus_of = |experts: &[Evolver]| {
        ConsensusMatrix::from_individuals(dims, experts.iter().flat_map(|e| e.elites(elites)))
    };

    let mut consensus: Option<ConsensusMatrix> = None;
    let mut barriers = 0;
    loop {
        let current = consensus.as_ref();
        experts.par_iter_mut().for_each(|e| {
            for _ in 0..cfg.aggregation_interval {
                if e.is_finished() {
                    break;
                }
                e.step(current, cfg.bias);
            }
        });
        if experts.iter().all(Evolver::is_finished) {
            break;
        }
        consensus = Some(consensus_of(&experts));
        barriers += 1;
    }

    let final_consensus = consensus_of(&experts);
    let objective = Objective::new(instance.clone(), cfg.ga.model);
    let aggregate = Individual::evaluated(
        Genome::Permutation(aggregate_solution(&final_consensus)?),
        &objective,
    );

    let mut best = aggregate.clone();
    let mut best_source = BestSource::Aggregate;
    for (i, e) in experts.iter().enumerate() {
        if e.best().fitness.fitness > best.fitness.fitness {
            best = e.best().clone();
            best_source = BestSource::Expert(i);
        }
    }
    let histories: Vec<RunHistory> = experts.into_iter().map(Evolver::into_history).collect();
    Ok(CrowdHistory {
        evaluations: histories.iter().map(|h| h.evaluations).sum(),
        experts: histories,
        aggregation_interval: cfg.aggregation_interval,
        barriers,
        final_consensus,
        aggregate,
        best,
        best_source,
        aggregate_evaluations: 1,
        wall: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(p: &[usize]) -> PermutationPlacement {
        PermutationPlacement::new(p.to_vec()).unwrap()
    }

    fn sq(n: usize) -> Dims {
        Dims::square(n).unwrap()
    }

    #[test]
    fn single_elite_is_its_occupancy() {
        let p = perm(&[2, 0, 1]);
        let f = build_consensus(sq(3), &[p.to_placement()]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(
                    f.frequency(i, j),
                    if p.column_of(i) == j { 1.0 } else { 0.0 }
                );
            }
        }
    }

    #[test]
    fn identical_elites_give_n_ones() {
        let p = perm(&[1, 3, 0, 2]).to_placement();
        let f = build_consensus(sq(4), &[p.clone(), p.clone(), p]).unwrap();
        let ones = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| f.frequency(i, j) == 1.0)
            .count();
        assert_eq!(ones, 4);
        assert!((0..4).all(|i| (0..4).all(|j| matches!(f.count(i, j), 0 | 3))));
    }

    #[test]
    fn disjoint_elites_split_evenly() {
        let f = build_consensus(
            sq(2),
            &[perm(&[0, 1]).to_placement(), perm(&[1, 0]).to_placement()],
        )
        .unwrap();
        assert!((0..2).all(|i| (0..2).all(|j| f.frequency(i, j) == 0.5)));
        assert_eq!(alignment(&perm(&[0, 1]), &f).unwrap(), 0.5);
        assert_eq!(alignment(&perm(&[1, 0]), &f).unwrap(), 0.5);
    }

    #[test]
    fn consensus_errors() {
        assert!(build_consensus(sq(2), &[]).is_err());
        assert!(build_consensus(sq(2), &[Placement::new([(2, 2)])]).is_err());
        let f = build_consensus(sq(2), &[perm(&[0, 1]).to_placement()]).unwrap();
        assert!(alignment(&perm(&[0, 1, 2]), &f).is_err());
    }

    #[test]
    fn alignment_extremes() {
        let p = perm(&[3, 1, 2, 0]);
        let own = build_consensus(sq(4), &[p.to_placement()]).unwrap();
        assert_eq!(alignment(&p, &own).unwrap(), 1.0);
        let zero = ConsensusMatrix::tally(sq(4), std::iter::once(std::iter::empty()));
        assert_eq!(alignment(&p, &zero).unwrap(), 0.0);
    }

    #[test]
    fn aggregate_rules() {
        let p = perm(&[2, 0, 3, 1]);
        let f = build_consensus(sq(4), &[p.to_placement()]).unwrap();
        assert_eq!(aggregate_solution(&f).unwrap(), p);
        let zero = ConsensusMatrix::tally(sq(3), std::iter::once(std::iter::empty()));
        assert_eq!(aggregate_solution(&zero).unwrap(), perm(&[0, 1, 2]));
        // F[0][0] = 0.9, F[1][0] = 0.8, F[1][1] = 0.1 as counts over ten contributors
        let mut weighted = ConsensusMatrix::tally(sq(2), (0..10).map(|_| std::iter::empty()));
        weighted.counts = vec![9, 0, 8, 1];
        assert_eq!(aggregate_solution(&weighted).unwrap(), perm(&[0, 1]));
        let rect = ConsensusMatrix::tally(
            Dims::new(2, 3).unwrap(),
            std::iter::once(std::iter::empty()),
        );
        assert!(aggregate_solution(&rect).is_err());
    }

    #[test]
    fn jitter_leaves_first_expert_alone() {
        let cfg = CrowdConfig::default();
        let rates: Vec<f64> = (0..5).map(|i| cfg.expert_config(i).mutation_rate).collect();
        assert_eq!(rates[0], cfg.ga.mutation_rate);
        assert!((rates[1] - 0.25).abs() < 1e-12 && (rates[2] - 0.15).abs() < 1e-12);
        assert!((rates[3] - 0.3).abs() < 1e-12 && (rates[4] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn config_errors() {
        let inst = Instance::ones(sq(3));
        for bad in [
            CrowdConfig {
                experts: 0,
                ..CrowdConfig::default()
            },
            CrowdConfig {
                aggregation_interval: 0,
                ..CrowdConfig::default()
            },
            CrowdConfig {
                elite_fraction: 0.0,
                ..CrowdConfig::default()
            },
            CrowdConfig {
                bias: 1.5,
                ..CrowdConfig::default()
            },
        ] {
            assert!(run_crowd(&inst, &bad).is_err());
        }
        assert!(run_crowd(
            &Instance::ones(Dims::new(2, 3).unwrap()),
            &CrowdConfig::default()
        )
        .is_err());
    }
}
