//! Benchmark runner comparing methods at equal evaluation budgets.
//!
//! Every `(size, method, seed)` cell runs on the all-ones `n x n` grid. The GA gets
//! `budget / population - 1` generations, so it spends `population * (budget /
//! population)` evaluations. The crowd splits the same number of population-sized
//! evaluation units evenly across its experts. Rows come out sorted by size, method
//! name and seed regardless of how the cells were scheduled.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    exact_best_permutation, exact_min_dominating, greedy_dominate, OracleBudget,
};
use crate::error::{Error, Result};
use crate::fitness::{fitness, FitnessBreakdown};
use crate::ga::{self, GaConfig};
use crate::types::{Dims, DominationModel, Instance, Placement};
use crate::woc::{run_crowd, CrowdConfig};

pub const CSV_HEADER: &str =
    "run_id,method,n,seed,generations,evaluations,best_fitness,best_influence,best_penalty,dominator_count,wall_ms,status";

pub const STATUS_OK: &str = "ok";
pub const STATUS_ORACLE_BUDGET: &str = "skipped-oracle-budget";
pub const STATUS_EVALUATION_BUDGET: &str = "skipped-evaluation-budget";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Greedy,
    Exact,
    Ga,
    GaWoc,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Greedy, Method::Exact, Method::Ga, Method::GaWoc];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::Exact => "exact",
            Method::Ga => "ga",
            Method::GaWoc => "ga-woc",
        }
    }

    fn is_heuristic(&self) -> bool {
        matches!(self, Method::Ga | Method::GaWoc)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::validation(format!(
                    "unknown method '{s}' (expected greedy, exact, ga or ga-woc)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub sizes: Vec<usize>,
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
    pub evaluation_budget: u64,
    pub model: DominationModel,
    /// Template for GA runs and for every crowd expert.
    pub ga: GaConfig,
    pub crowd: CrowdConfig,
    pub oracle: OracleBudget,
    /// When false, `wall_ms` is written as 0 so repeated runs produce identical files.
    pub record_timing: bool,
    pub output: Option<PathBuf>,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            sizes: vec![10],
            methods: vec![Method::Ga, Method::GaWoc],
            seeds: (0..10).collect(),
            evaluation_budget: 50_000,
            model: DominationModel::Adjacency,
            ga: GaConfig::default(),
            crowd: CrowdConfig::default(),
            oracle: OracleBudget::default(),
            record_timing: true,
            output: None,
        }
    }
}

/// TOML form of a [`BenchSpec`]; omitted keys take the defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchFile {
    pub sizes: Option<Vec<usize>>,
    pub methods: Option<Vec<String>>,
    pub seeds: Option<Vec<u64>>,
    pub evaluation_budget: Option<u64>,
    pub model: Option<String>,
    pub population: Option<usize>,
    pub experts: Option<usize>,
    pub record_timing: Option<bool>,
    pub output: Option<PathBuf>,
}

impl BenchFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::validation(format!("bench spec: {e}")))
    }

    pub fn into_spec(self) -> Result<BenchSpec> {
        let mut spec = BenchSpec::default();
        if let Some(v) = self.sizes {
            spec.sizes = v;
        }
        if let Some(v) = self.methods {
            spec.methods = v.iter().map(|m| m.parse()).collect::<Result<_>>()?;
        }
        if let Some(v) = self.seeds {
            spec.seeds = v;
        }
        if let Some(v) = self.evaluation_budget {
            spec.evaluation_budget = v;
        }
        if let Some(v) = self.model {
            spec.model = v.parse()?;
        }
        if let Some(v) = self.population {
            spec.ga.population_size = v;
        }
        if let Some(v) = self.experts {
            spec.crowd.experts = v;
        }
        if let Some(v) = self.record_timing {
            spec.record_timing = v;
        }
        spec.output = self.output;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub run_id: usize,
    pub method: String,
    pub n: usize,
    pub seed: u64,
    pub generations: usize,
    pub evaluations: u64,
    pub best_fitness: i64,
    pub best_influence: u64,
    pub best_penalty: u64,
    pub dominator_count: usize,
    pub wall_ms: u64,
    pub status: String,
}

impl BenchSpec {
    fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.methods.is_empty() || self.seeds.is_empty() {
            return Err(Error::config(
                "a benchmark needs at least one size, method and seed",
            ));
        }
        if self.sizes.contains(&0) {
            return Err(Error::config("benchmark sizes must be positive"));
        }
        if self.methods.iter().any(Method::is_heuristic)
            && self.evaluation_budget < self.ga.population_size as u64
        {
            return Err(Error::config(format!(
                "evaluation budget {} is below the population size {}",
                self.evaluation_budget, self.ga.population_size
            )));
        }
        Ok(())
    }

    /// Population-sized evaluation units the budget buys.
    fn units(&self) -> usize {
        (self.evaluation_budget / self.ga.population_size as u64) as usize
    }

    /// GA configuration for one seed, sized to the evaluation budget.
    pub fn ga_config(&self, seed: u64) -> GaConfig {
        GaConfig {
            seed,
            generations: self.units() - 1,
            model: self.model,
            ..self.ga.clone()
        }
    }

    /// Crowd configuration for one master seed; `None` when the budget cannot give
    /// every expert a full population.
    pub fn crowd_config(&self, seed: u64) -> Option<CrowdConfig> {
        let per_expert = self.units() / self.crowd.experts.max(1);
        (per_expert >= 1).then(|| CrowdConfig {
            master_seed: seed,
            ga: GaConfig {
                generations: per_expert - 1,
                model: self.model,
                ..self.ga.clone()
            },
            ..self.crowd.clone()
        })
    }
}

fn row(method: Method, n: usize, seed: u64) -> BenchRow {
    BenchRow {
        run_id: 0,
        method: method.name().to_string(),
        n,
        seed,
        generations: 0,
        evaluations: 0,
        best_fitness: 0,
        best_influence: 0,
        best_penalty: 0,
        dominator_count: 0,
        wall_ms: 0,
        status: STATUS_OK.to_string(),
    }
}

fn fill(mut r: BenchRow, fb: FitnessBreakdown, dominators: usize) -> BenchRow {
    r.best_fitness = fb.fitness;
    r.best_influence = fb.influence;
    r.best_penalty = fb.penalty;
    r.dominator_count = dominators;
    r
}

fn skipped(mut r: BenchRow, status: &str) -> BenchRow {
    r.status = status.to_string();
    r
}

fn run_cell(spec: &BenchSpec, method: Method, n: usize, seed: u64) -> Result<BenchRow> {
    let started = Instant::now();
    let instance = Instance::ones(Dims::square(n)?);
    let base = row(method, n, seed);
    let placement_row = |p: &Placement| -> Result<BenchRow> {
        Ok(fill(
            base.clone(),
            fitness(&instance, p, spec.model)?,
            p.len(),
        ))
    };
    let mut out = match method {
        Method::Greedy => placement_row(&greedy_dominate(&instance, spec.model))?,
        Method::Exact => {
            let found = match spec.model {
                DominationModel::Adjacency => {
                    exact_best_permutation(n, spec.oracle).map(|(p, _)| p.to_placement())
                }
                DominationModel::Line => exact_min_dominating(&instance, spec.model, spec.oracle),
            };
            match found {
                Ok(p) => placement_row(&p)?,
                Err(Error::Budget { .. }) => skipped(base, STATUS_ORACLE_BUDGET),
                Err(e) => return Err(e),
            }
        }
        Method::Ga => {
            let h = ga::run(&instance, &spec.ga_config(seed))?;
            let mut r = fill(base, h.best.fitness, h.best.genome.len());
            r.generations = h.generations;
            r.evaluations = h.evaluations;
            r
        }
        Method::GaWoc => match spec.crowd_config(seed) {
            Some(cfg) => {
                let h = run_crowd(&instance, &cfg)?;
                let mut r = fill(base, h.best.fitness, h.best.genome.len());
                r.generations = h.experts.iter().map(|e| e.generations).max().unwrap_or(0);
                r.evaluations = h.evaluations;
                r
            }
            None => skipped(base, STATUS_EVALUATION_BUDGET),
        },
    };
    if spec.record_timing {
        out.wall_ms = started.elapsed().as_millis() as u64;
    }
    Ok(out)
}

/// Runs every cell and, when `spec.output` is set, writes the CSV there.
pub fn run_benchmark(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    spec.validate()?;
    let mut sizes = spec.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut methods = spec.methods.clone();
    methods.sort_by_key(|m| m.name());
    methods.dedup();
    let mut seeds = spec.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();

    let mut cells = Vec::with_capacity(sizes.len() * methods.len() * seeds.len());
    for &n in &sizes {
        for &m in &methods {
            cells.extend(seeds.iter().map(|&s| (n, m, s)));
        }
    }
    let mut rows = cells
        .par_iter()
        .map(|&(n, m, s)| run_cell(spec, m, n, s))
        .collect::<Result<Vec<_>>>()?;
    for (id, r) in rows.iter_mut().enumerate() {
        r.run_id = id;
    }
    if let Some(path) = &spec.output {
        std::fs::write(path, rows_to_csv(&rows)?)?;
    }
    Ok(rows)
}

fn csv_err(e: impl fmt::Display) -> Error {
    Error::Io(format!("csv: {e}"))
}

pub fn rows_to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

pub fn rows_from_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::validation(format!(
            "unexpected CSV header '{}'",
            header.join(",")
        )));
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// Mean, population standard deviation, min and max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    fn of(values: &[f64]) -> Stats {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Stats {
            mean,
            std: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub n: usize,
    pub method: String,
    pub runs: usize,
    pub fitness: Stats,
    pub wall_ms: Stats,
}

/// GA-WoC against GA over the seeds both ran.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadToHead {
    pub n: usize,
    pub seeds: usize,
    pub woc_wins: usize,
    pub ties: usize,
    /// `(wins + ties / 2) / seeds`.
    pub win_rate: f64,
    pub mean_fitness_ga: f64,
    pub mean_fitness_woc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub groups: Vec<GroupSummary>,
    pub head_to_head: Vec<HeadToHead>,
}

/// Per-size, per-method statistics over rows with status `ok`, plus head-to-head
/// win rates wherever both `ga` and `ga-woc` ran.
pub fn summarize(rows: &[BenchRow]) -> Result<Summary> {
    if rows.is_empty() {
        return Err(Error::validation("cannot summarise an empty benchmark"));
    }
    let mut groups: BTreeMap<(usize, &str), Vec<&BenchRow>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.status == STATUS_OK) {
        groups.entry((r.n, r.method.as_str())).or_default().push(r);
    }
    let summaries = groups
        .iter()
        .map(|(&(n, method), rs)| GroupSummary {
            n,
            method: method.to_string(),
            runs: rs.len(),
            fitness: Stats::of(&rs.iter().map(|r| r.best_fitness as f64).collect::<Vec<_>>()),
            wall_ms: Stats::of(&rs.iter().map(|r| r.wall_ms as f64).collect::<Vec<_>>()),
        })
        .collect();

    let mut head_to_head = Vec::new();
    let sizes: Vec<usize> = groups.keys().map(|&(n, _)| n).collect();
    let mut seen = sizes.clone();
    seen.dedup();
    for n in seen {
        let (Some(ga), Some(woc)) = (groups.get(&(n, "ga")), groups.get(&(n, "ga-woc"))) else {
            continue;
        };
        let ga_by_seed: BTreeMap<u64, i64> = ga.iter().map(|r| (r.seed, r.best_fitness)).collect();
        let pairs: Vec<(i64, i64)> = woc
            .iter()
            .filter_map(|r| ga_by_seed.get(&r.seed).map(|&g| (g, r.best_fitness)))
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let wins = pairs.iter().filter(|(g, w)| w > g).count();
        let ties = pairs.iter().filter(|(g, w)| w == g).count();
        let k = pairs.len() as f64;
        head_to_head.push(HeadToHead {
            n,
            seeds: pairs.len(),
            woc_wins: wins,
            ties,
            win_rate: (wins as f64 + 0.5 * ties as f64) / k,
            mean_fitness_ga: pairs.iter().map(|p| p.0 as f64).sum::<f64>() / k,
            mean_fitness_woc: pairs.iter().map(|p| p.1 as f64).sum::<f64>() / k,
        });
    }
    Ok(Summary {
        groups: summaries,
        head_to_head,
    })
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>5} {:<8} {:>5} {:>10} {:>8} {:>8} {:>8} {:>10} {:>8}",
            "n", "method", "runs", "fit_mean", "fit_std", "fit_min", "fit_max", "ms_mean", "ms_max"
        )?;
        for g in &self.groups {
            writeln!(
                f,
                "{:>5} {:<8} {:>5} {:>10.3} {:>8.3} {:>8} {:>8} {:>10.1} {:>8}",
                g.n,
                g.method,
                g.runs,
                g.fitness.mean,
                g.fitness.std,
                g.fitness.min,
                g.fitness.max,
                g.wall_ms.mean,
                g.wall_ms.max
            )?;
        }
        for h in &self.head_to_head {
            writeln!(
                f,
                "n={} ga-woc vs ga: {} seeds, {} wins, {} ties, win rate {:.3}, mean fitness {:.3} vs {:.3}",
                h.n, h.seeds, h.woc_wins, h.ties, h.win_rate, h.mean_fitness_woc, h.mean_fitness_ga
            )?;
        }
        Ok(())
    }
}
