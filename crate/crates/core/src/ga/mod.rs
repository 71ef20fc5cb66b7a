//! Single-population genetic algorithm.
//!
//! With repair enabled every genome is a [`PermutationPlacement`] (one dominator per
//! row and column) and variation preserves that. With repair disabled genomes are free
//! placements of `rows` cells that may violate the row/column rule and pay the penalty.
//!
//! A run is driven by an [`Evolver`], which advances one generation per
//! [`Evolver::step`]. The crowd layer in [`crate::woc`] steps several evolvers between
//! consensus barriers; [`run`] simply steps one to completion.

mod operators;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::Rng;

pub use operators::{crossover_free, crossover_permutation, mutate};

use crate::coverage::{adjacency_count_sparse, line_mask, required_cells};
use crate::error::{Error, Result};
use crate::fitness::{placement_penalty, FitnessBreakdown};
use crate::generate::{permutation_with, placement_with, rng_from_seed, SeededRng};
use crate::repair::repair;
use crate::types::{Dims, DominationModel, Instance, PermutationPlacement, Placement};
use crate::woc::ConsensusMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Probability that an offspring receives one mutation.
    pub mutation_rate: f64,
    pub tournament_size: usize,
    pub elitism_count: usize,
    pub repair_enabled: bool,
    pub model: DominationModel,
    pub seed: u64,
    /// Stop once the best individual covers every required cell and has not
    /// improved for this many generations.
    pub early_stop: Option<usize>,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            generations: 300,
            crossover_rate: 0.9,
            mutation_rate: 0.2,
            tournament_size: 3,
            elitism_count: 2,
            repair_enabled: true,
            model: DominationModel::Adjacency,
            seed: 0,
            early_stop: None,
        }
    }
}

fn check_rate(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::config(format!("{name} must lie in [0, 1], got {v}")))
    }
}

impl GaConfig {
    pub fn validate(&self, dims: Dims) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::config("population size must be positive"));
        }
        if self.tournament_size == 0 {
            return Err(Error::config("tournament size must be at least 1"));
        }
        if self.elitism_count >= self.population_size {
            return Err(Error::config(format!(
                "elitism count {} must be below the population size {}",
                self.elitism_count, self.population_size
            )));
        }
        check_rate("crossover rate", self.crossover_rate)?;
        check_rate("mutation rate", self.mutation_rate)?;
        if self.repair_enabled && !dims.is_square() {
            return Err(Error::config(format!(
                "the permutation encoding needs a square instance, got {dims}"
            )));
        }
        Ok(())
    }
}

/// Candidate encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Genome {
    Permutation(PermutationPlacement),
    Free(Placement),
}

impl Genome {
    pub fn len(&self) -> usize {
        match self {
            Genome::Permutation(p) => p.len(),
            Genome::Free(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cells(&self) -> Box<dyn Iterator<Item = (usize, usize)> + '_> {
        match self {
            Genome::Permutation(p) => Box::new(p.as_slice().iter().copied().enumerate()),
            Genome::Free(p) => Box::new(p.iter()),
        }
    }

    pub fn to_placement(&self) -> Placement {
        match self {
            Genome::Permutation(p) => p.to_placement(),
            Genome::Free(p) => p.clone(),
        }
    }
}

/// The fitness function a run maximises.
///
/// Influence under [`DominationModel::Line`] only counts dominators that sit on
/// 1-entries; others cover nothing but still count towards the penalty.
#[derive(Debug, Clone)]
pub struct Objective {
    instance: Instance,
    model: DominationModel,
}

impl Objective {
    pub fn new(instance: Instance, model: DominationModel) -> Self {
        Objective { instance, model }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn dims(&self) -> Dims {
        self.instance.dims()
    }

    pub fn model(&self) -> DominationModel {
        self.model
    }

    pub fn required(&self) -> usize {
        required_cells(&self.instance, self.model)
    }

    pub fn evaluate(&self, genome: &Genome) -> FitnessBreakdown {
        let dims = self.dims();
        let influence = match (self.model, genome) {
            (DominationModel::Adjacency, Genome::Permutation(p)) => {
                adjacency_count_sparse(dims, p.as_slice().iter().copied().enumerate())
            }
            (DominationModel::Adjacency, Genome::Free(p)) => adjacency_count_sparse(dims, p.iter()),
            (DominationModel::Line, _) => line_mask(
                &self.instance,
                genome.cells().filter(|&(i, j)| self.instance.get(i, j)),
            )
            .count(),
        };
        let penalty = match genome {
            Genome::Permutation(_) if dims.is_square() => 0,
            _ => placement_penalty(dims, genome.cells()),
        };
        FitnessBreakdown::new(influence as u64, penalty)
    }
}

/// A genome with its cached fitness.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Individual {
    pub genome: Genome,
    pub fitness: FitnessBreakdown,
}

impl Individual {
    pub fn evaluated(genome: Genome, objective: &Objective) -> Self {
        let fitness = objective.evaluate(&genome);
        Individual { genome, fitness }
    }
}

/// Statistics of one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_fitness: i64,
    pub mean_fitness: f64,
    pub best_influence: u64,
    pub best_penalty: u64,
    /// Largest penalty present anywhere in the population.
    pub max_penalty: u64,
    /// Cumulative evaluations once this generation is complete.
    pub evaluations: u64,
}

pub const HISTORY_HEADER: &str =
    "generation,best_fitness,mean_fitness,best_influence,best_penalty,max_penalty,evaluations";

impl GenerationRecord {
    pub(crate) fn csv_fields(&self) -> String {
        format!(
            "{},{},{:.4},{},{},{},{}",
            self.generation,
            self.best_fitness,
            self.mean_fitness,
            self.best_influence,
            self.best_penalty,
            self.max_penalty,
            self.evaluations
        )
    }
}

#[derive(Debug, Clone)]
pub struct RunHistory {
    pub records: Vec<GenerationRecord>,
    /// Best individual seen in any generation.
    pub best: Individual,
    pub evaluations: u64,
    pub generations: usize,
    pub wall: Duration,
}

impl RunHistory {
    /// Per-generation CSV. Wall time is left out so fixed seeds give identical bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(HISTORY_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(out, "{}", r.csv_fields());
        }
        out
    }

    /// Everything except wall time.
    pub fn same_trajectory(&self, other: &RunHistory) -> bool {
        self.records == other.records
            && self.best == other.best
            && self.evaluations == other.evaluations
            && self.generations == other.generations
    }
}

pub fn init_population<R: Rng + ?Sized>(
    objective: &Objective,
    cfg: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    let dims = objective.dims();
    cfg.validate(dims)?;
    (0..cfg.population_size)
        .map(|_| {
            let genome = if cfg.repair_enabled {
                Genome::Permutation(permutation_with(dims.rows, rng)?)
            } else {
                Genome::Free(placement_with(dims, dims.rows, rng)?)
            };
            Ok(Individual::evaluated(genome, objective))
        })
        .collect()
}

/// Tournament of `size` draws with replacement.
///
/// Each entrant scores `f + bias * n * alignment` when a consensus matrix is given
/// (`n` being the genome length), plain `f` otherwise. The highest score wins; ties
/// stay with the entrant drawn first.
pub fn tournament_select<'p, R: Rng + ?Sized>(
    population: &'p [Individual],
    size: usize,
    rng: &mut R,
    consensus: Option<&ConsensusMatrix>,
    bias: f64,
) -> &'p Individual {
    assert!(
        !population.is_empty(),
        "tournament over an empty population"
    );
    let scores = selection_scores(population, consensus, bias);
    &population[tournament_index(&scores, size, rng)]
}

fn selection_scores(
    population: &[Individual],
    consensus: Option<&ConsensusMatrix>,
    bias: f64,
) -> Vec<f64> {
    let guide = consensus.filter(|_| bias != 0.0);
    population
        .iter()
        .map(|ind| match guide {
            Some(f) => {
                ind.fitness.fitness as f64
                    + bias * ind.genome.len() as f64 * f.genome_alignment(&ind.genome)
            }
            None => ind.fitness.fitness as f64,
        })
        .collect()
}

fn tournament_index<R: Rng + ?Sized>(scores: &[f64], size: usize, rng: &mut R) -> usize {
    let mut winner = rng.gen_range(0..scores.len());
    for _ in 1..size {
        let entrant = rng.gen_range(0..scores.len());
        if scores[entrant] > scores[winner] {
            winner = entrant;
        }
    }
    winner
}

/// Owns one population and its random stream; advances a generation at a time.
#[derive(Debug, Clone)]
pub struct Evolver {
    cfg: GaConfig,
    objective: Objective,
    rng: SeededRng,
    /// Sorted by fitness, best first; ties keep their previous order.
    population: Vec<Individual>,
    generation: usize,
    evaluations: u64,
    records: Vec<GenerationRecord>,
    best: Individual,
    stagnant: usize,
    stopped: bool,
    started: Instant,
}

fn sort_population(pop: &mut [Individual]) {
    pop.sort_by_key(|ind| std::cmp::Reverse(ind.fitness.fitness));
}

impl Evolver {
    pub fn new(instance: &Instance, cfg: GaConfig) -> Result<Self> {
        let started = Instant::now();
        let objective = Objective::new(instance.clone(), cfg.model);
        let mut rng = rng_from_seed(cfg.seed);
        let mut population = init_population(&objective, &cfg, &mut rng)?;
        sort_population(&mut population);
        let best = population[0].clone();
        let mut ev = Evolver {
            evaluations: cfg.population_size as u64,
            cfg,
            objective,
            rng,
            population,
            generation: 0,
            records: Vec::new(),
            best,
            stagnant: 0,
            stopped: false,
            started,
        };
        ev.record();
        Ok(ev)
    }

    fn record(&mut self) {
        let pop = &self.population;
        let top = &pop[0].fitness;
        let mean = pop.iter().map(|i| i.fitness.fitness as f64).sum::<f64>() / pop.len() as f64;
        self.records.push(GenerationRecord {
            generation: self.generation,
            best_fitness: top.fitness,
            mean_fitness: mean,
            best_influence: top.influence,
            best_penalty: top.penalty,
            max_penalty: pop.iter().map(|i| i.fitness.penalty).max().unwrap_or(0),
            evaluations: self.evaluations,
        });
    }

    pub fn config(&self) -> &GaConfig {
        &self.cfg
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn best(&self) -> &Individual {
        &self.best
    }

    pub fn records(&self) -> &[GenerationRecord] {
        &self.records
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn is_finished(&self) -> bool {
        self.stopped || self.generation >= self.cfg.generations
    }

    /// The `k` fittest individuals of the current generation.
    pub fn elites(&self, k: usize) -> &[Individual] {
        &self.population[..k.min(self.population.len())]
    }

    /// Breeds the next generation. A consensus matrix with non-zero `bias` steers
    /// selection and mutation towards the crowd.
    pub fn step(&mut self, consensus: Option<&ConsensusMatrix>, bias: f64) {
        if self.is_finished() {
            return;
        }
        let cfg = &self.cfg;
        let n = self.objective.dims().rows;
        let scores = selection_scores(&self.population, consensus, bias);
        let mut next: Vec<Individual> = self.population[..cfg.elitism_count].to_vec();
        while next.len() < cfg.population_size {
            let a = &self.population[tournament_index(&scores, cfg.tournament_size, &mut self.rng)];
            let mut genome = if self.rng.gen_bool(cfg.crossover_rate) {
                let b =
                    &self.population[tournament_index(&scores, cfg.tournament_size, &mut self.rng)];
                match (&a.genome, &b.genome) {
                    (Genome::Permutation(x), Genome::Permutation(y)) => Genome::Permutation(
                        crossover_permutation(x, y, &mut self.rng)
                            .expect("population shares one order"),
                    ),
                    (x, y) => Genome::Free(crossover_free(
                        &x.to_placement(),
                        &y.to_placement(),
                        &mut self.rng,
                    )),
                }
            } else {
                a.genome.clone()
            };
            operators::mutate_genome(
                &mut genome,
                cfg.mutation_rate,
                &mut self.rng,
                consensus,
                bias,
                &self.objective,
            );
            if cfg.repair_enabled {
                if let Genome::Free(p) = &genome {
                    genome = Genome::Permutation(repair(p, n));
                }
            }
            next.push(Individual::evaluated(genome, &self.objective));
        }
        sort_population(&mut next);
        self.population = next;
        self.generation += 1;
        self.evaluations += cfg.population_size as u64;

        if self.population[0].fitness.fitness > self.best.fitness.fitness {
            self.best = self.population[0].clone();
            self.stagnant = 0;
        } else {
            self.stagnant += 1;
        }
        if let Some(patience) = self.cfg.early_stop {
            let complete = self.best.fitness.penalty == 0
                && self.best.fitness.influence as usize == self.objective.required();
            if complete && self.stagnant >= patience {
                self.stopped = true;
            }
        }
        self.record();
    }

    pub fn run_to_end(&mut self) {
        while !self.is_finished() {
            self.step(None, 0.0);
        }
    }

    pub fn into_history(self) -> RunHistory {
        RunHistory {
            records: self.records,
            best: self.best,
            evaluations: self.evaluations,
            generations: self.generation,
            wall: self.started.elapsed(),
        }
    }
}

/// Runs the generational loop until the generation limit or early stop.
pub fn run(instance: &Instance, cfg: &GaConfig) -> Result<RunHistory> {
    let mut ev = Evolver::new(instance, cfg.clone())?;
    ev.run_to_end();
    Ok(ev.into_history())
}
