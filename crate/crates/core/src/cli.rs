//! Command-line front end.
//!
//! Exit status: 0 success, 1 domain error, 2 usage error, 3 certificate rejected.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{exact_min_dominating, greedy_dominate, OracleBudget};
use crate::certificate::{verify_certificate, CertificateQuery};
use crate::error::{Error, Result};
use crate::fitness::fitness;
use crate::ga::{self, GaConfig};
use crate::generate::{random_instance, GenSpec};
use crate::harness::{rows_to_csv, run_benchmark, summarize, BenchFile, BenchSpec, Method};
use crate::io::{format_instance, format_placement, parse_instance, parse_placement};
use crate::render::{render_ascii, render_raw, render_svg, RenderSpec};
use crate::types::{Dims, DominationModel, Instance, Placement};
use crate::woc::{run_crowd, CrowdConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "matdom", version, about = "Matrix domination solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a random instance
    Generate(GenerateArgs),
    /// Solve an instance and write the best placement
    Solve(SolveArgs),
    /// Check a certificate; exits 0 when accepted, 3 when rejected
    Verify(VerifyArgs),
    /// Run a benchmark grid and write CSV rows
    Bench(BenchArgs),
    /// Draw a placement as SVG or text
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Line,
    Adjacency,
}

impl From<ModelArg> for DominationModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Line => DominationModel::Line,
            ModelArg::Adjacency => DominationModel::Adjacency,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Greedy,
    Exact,
    Ga,
    #[value(name = "ga-woc")]
    GaWoc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Ascii,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    /// Columns; defaults to n
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "n"])))]
struct SolveArgs {
    /// Instance file
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Solve the all-ones n x n grid
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "ga")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "adjacency")]
    model: ModelArg,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long = "mutation-rate")]
    mutation_rate: Option<f64>,
    #[arg(long = "crossover-rate")]
    crossover_rate: Option<f64>,
    #[arg(long)]
    tournament: Option<usize>,
    #[arg(long)]
    elitism: Option<usize>,
    #[arg(long, value_enum, default_value = "on")]
    repair: Switch,
    #[arg(long)]
    experts: Option<usize>,
    #[arg(long = "aggregation-interval")]
    aggregation_interval: Option<usize>,
    #[arg(long = "elite-fraction")]
    elite_fraction: Option<f64>,
    #[arg(long)]
    bias: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluation budget for ga / ga-woc (overrides --generations); cell cap for exact
    #[arg(long)]
    budget: Option<u64>,
    /// Placement output; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-generation CSV (ga and ga-woc only)
    #[arg(long)]
    history: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    cert: PathBuf,
    /// Bound K; defaults to the certificate size
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "adjacency")]
    model: ModelArg,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// TOML benchmark description; inline flags override its values
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', conflicts_with = "seed_count")]
    seeds: Option<Vec<u64>>,
    /// Use seeds 0..N
    #[arg(long = "seed-count")]
    seed_count: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    experts: Option<usize>,
    /// Write wall_ms as 0 so repeated runs give identical files
    #[arg(long = "no-timing")]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    cert: PathBuf,
    #[arg(long, value_enum, default_value = "ascii")]
    format: Format,
    /// Shade dominated cells (svg)
    #[arg(long)]
    coverage: bool,
    /// Plain 1/0 occupancy dump (ascii)
    #[arg(long)]
    raw: bool,
    #[arg(long, value_enum, default_value = "adjacency")]
    model: ModelArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`dispatch`] with explicit output streams.
pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a, out),
        Command::Solve(a) => solve(a, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Bench(a) => bench(a, out, err),
        Command::Render(a) => render(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    }
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> CmdResult {
    let spec = GenSpec {
        rows: a.n,
        cols: a.m.unwrap_or(a.n),
        density: a.density,
        seed: a.seed,
    };
    let instance = random_instance(&spec)?;
    emit(a.out.as_deref(), &format_instance(&instance), out)?;
    Ok(EXIT_OK)
}

fn load_instance(input: Option<&Path>, n: Option<usize>) -> Result<Instance> {
    match (input, n) {
        (Some(p), _) => parse_instance(&read(p)?),
        (None, Some(n)) => Ok(Instance::ones(Dims::square(n)?)),
        (None, None) => Err(Error::validation("an instance is required")),
    }
}

fn ga_config(a: &SolveArgs, model: DominationModel) -> GaConfig {
    let d = GaConfig::default();
    GaConfig {
        population_size: a.population.unwrap_or(d.population_size),
        generations: a.generations.unwrap_or(d.generations),
        crossover_rate: a.crossover_rate.unwrap_or(d.crossover_rate),
        mutation_rate: a.mutation_rate.unwrap_or(d.mutation_rate),
        tournament_size: a.tournament.unwrap_or(d.tournament_size),
        elitism_count: a.elitism.unwrap_or(d.elitism_count),
        repair_enabled: matches!(a.repair, Switch::On),
        model,
        seed: a.seed,
        early_stop: None,
    }
}

fn solve(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let model: DominationModel = a.model.into();
    let instance = load_instance(a.input.as_deref(), a.n)?;
    let heuristic = matches!(a.method, MethodArg::Ga | MethodArg::GaWoc);
    if a.history.is_some() && !heuristic {
        return Err(Failure::Usage(
            "--history applies only to ga and ga-woc".into(),
        ));
    }
    let mut spec = BenchSpec {
        model,
        ga: ga_config(&a, model),
        ..BenchSpec::default()
    };
    if let Some(b) = a.budget.filter(|_| heuristic) {
        if b < spec.ga.population_size as u64 {
            return Err(Failure::Usage(format!(
                "--budget {b} is below the population size {}",
                spec.ga.population_size
            )));
        }
        spec.evaluation_budget = b;
    }

    let (placement, history_csv) = match a.method {
        MethodArg::Greedy => (greedy_dominate(&instance, model), None),
        MethodArg::Exact => {
            let mut budget = OracleBudget::default();
            if let Some(b) = a.budget {
                budget.max_cells = b as usize;
            }
            (exact_min_dominating(&instance, model, budget)?, None)
        }
        MethodArg::Ga => {
            let cfg = if a.budget.is_some() {
                spec.ga_config(a.seed)
            } else {
                spec.ga.clone()
            };
            let h = ga::run(&instance, &cfg)?;
            (h.best.genome.to_placement(), Some(h.to_csv()))
        }
        MethodArg::GaWoc => {
            let d = CrowdConfig::default();
            spec.crowd = CrowdConfig {
                experts: a.experts.unwrap_or(d.experts),
                aggregation_interval: a.aggregation_interval.unwrap_or(d.aggregation_interval),
                elite_fraction: a.elite_fraction.unwrap_or(d.elite_fraction),
                bias: a.bias.unwrap_or(d.bias),
                ..d
            };
            let cfg = if a.budget.is_some() {
                spec.crowd_config(a.seed).ok_or_else(|| {
                    Failure::Usage("--budget is too small to give every expert a population".into())
                })?
            } else {
                CrowdConfig {
                    master_seed: a.seed,
                    ga: spec.ga.clone(),
                    ..spec.crowd.clone()
                }
            };
            let h = run_crowd(&instance, &cfg)?;
            (h.best.genome.to_placement(), Some(h.to_csv()))
        }
    };

    if let (Some(path), Some(csv)) = (a.history.as_deref(), history_csv) {
        emit(Some(path), &csv, out)?;
    }
    emit(a.out.as_deref(), &format_placement(&placement), out)?;
    let fb = summary_fitness(&instance, &placement, model);
    let line = format!(
        "dominators={} influence={} penalty={} fitness={}\n",
        placement.len(),
        fb.influence,
        fb.penalty,
        fb.fitness
    );
    // keep stdout clean when it carries the placement
    let sink: &mut dyn Write = if a.out.is_some() { out } else { err };
    let _ = sink.write_all(line.as_bytes());
    Ok(EXIT_OK)
}

fn summary_fitness(
    instance: &Instance,
    placement: &Placement,
    model: DominationModel,
) -> crate::FitnessBreakdown {
    fitness(instance, placement, model).unwrap_or_else(|_| {
        // line placements off the 1-pattern: score with the GA's lenient objective
        let obj = ga::Objective::new(instance.clone(), model);
        obj.evaluate(&ga::Genome::Free(placement.clone()))
    })
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let instance = parse_instance(&read(&a.input)?)?;
    let candidate = parse_placement(&read(&a.cert)?)?;
    let q = CertificateQuery {
        bound: a.k.unwrap_or(candidate.len()),
        instance,
        candidate,
        model: a.model.into(),
    };
    let verdict = verify_certificate(&q);
    let _ = writeln!(out, "{verdict}");
    Ok(if verdict.is_accepted() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    })
}

fn bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mut spec = match &a.spec {
        Some(p) => BenchFile::parse(&read(p)?)?.into_spec()?,
        None => BenchSpec::default(),
    };
    if let Some(v) = a.sizes {
        spec.sizes = v;
    }
    if let Some(v) = a.methods {
        spec.methods = v
            .iter()
            .map(|m| m.parse::<Method>())
            .collect::<Result<_>>()?;
    }
    if let Some(v) = a.seeds {
        spec.seeds = v;
    }
    if let Some(k) = a.seed_count {
        spec.seeds = (0..k).collect();
    }
    if let Some(v) = a.budget {
        spec.evaluation_budget = v;
    }
    if let Some(v) = a.model {
        spec.model = v.into();
    }
    if let Some(v) = a.population {
        spec.ga.population_size = v;
    }
    if let Some(v) = a.experts {
        spec.crowd.experts = v;
    }
    if a.no_timing {
        spec.record_timing = false;
    }
    if a.out.is_some() {
        spec.output = a.out;
    }
    let rows = run_benchmark(&spec)?;
    let summary = summarize(&rows)?.to_string();
    if spec.output.is_some() {
        let _ = out.write_all(summary.as_bytes());
    } else {
        emit(None, &rows_to_csv(&rows)?, out)?;
        let _ = err.write_all(summary.as_bytes());
    }
    Ok(EXIT_OK)
}

fn render(a: RenderArgs, out: &mut dyn Write) -> CmdResult {
    let instance = parse_instance(&read(&a.input)?)?;
    let placement = parse_placement(&read(&a.cert)?)?;
    let model = a.model.into();
    let text = match a.format {
        Format::Svg => {
            let spec = RenderSpec {
                show_coverage: a.coverage,
                ..RenderSpec::default()
            };
            render_svg(&instance, &placement, model, &spec)?
        }
        Format::Ascii if a.raw => render_raw(&instance, &placement)?,
        Format::Ascii => render_ascii(&instance, &placement, model)?,
    };
    emit(a.out.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}
