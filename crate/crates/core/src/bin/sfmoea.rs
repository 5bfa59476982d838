use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfmoea::archive::{read_points_csv, write_points_csv};
use sfmoea::harness::formats::{load_scp, write_profits, write_scp, write_tsp_coordinates};
use sfmoea::harness::generate::{
    cluster_points, combine_scp3, euclidean_points, random_profits, random_scp, DEFAULT_CLUSTERS,
    DEFAULT_COORDINATE_RANGE,
};
use sfmoea::harness::presets::{default_scalarizer, expected_rank_for};
use sfmoea::harness::report::{compare_methods, read_results_csv, render_report, render_table, summarize, Indicator};
use sfmoea::harness::{format_significant, InstanceSpec, ParameterPreset, ProblemKind, INDICATOR_DIGITS};
use sfmoea::harness::{run_experiment, ExperimentPlan};
use sfmoea::indicators::{r_weights, IndicatorConfig};
use sfmoea::scalarizing::{generate_uniform_weights, granularity_at_least, granularity_for_count, lattice_size};
use sfmoea::{Error, Method, MethodConfig, ObjectivePoint, Result, ScalarizerKind, ScalarizerSpec};

#[derive(Parser)]
#[command(name = "sfmoea", version, about = "Scalarizing-function based multiobjective metaheuristics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Run one method once and write its final archive.
    Run(RunArgs),
    /// Compute R and hypervolume for archive CSV files.
    Eval(EvalArgs),
    /// Pairwise Wilcoxon tests over results CSV files.
    Compare(CompareArgs),
    /// Mean (std) table over results CSV files.
    Table(TableArgs),
    /// Replicated runs of several methods with results, archives and report.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Euclidean,
    Cluster,
    Profits,
    Scp,
    Scp3,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Cities (euclidean, cluster, profits).
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_COORDINATE_RANGE)]
    range: f64,
    #[arg(long, default_value_t = DEFAULT_CLUSTERS)]
    clusters: usize,
    #[arg(long, default_value_t = 1)]
    min: i64,
    #[arg(long, default_value_t = 100)]
    max: i64,
    #[arg(long, default_value_t = 200)]
    rows: usize,
    #[arg(long, default_value_t = 1000)]
    cols: usize,
    #[arg(long, default_value_t = 2)]
    objectives: usize,
    #[arg(long, default_value_t = 0.02)]
    density: f64,
    /// scp3: instance providing coverage and objectives 1 and 2.
    #[arg(long)]
    first: Option<PathBuf>,
    /// scp3: instance whose first objective becomes objective 3.
    #[arg(long)]
    second: Option<PathBuf>,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    problem: ProblemKind,
    /// Instance files: one per objective (tsp), coordinates then profits
    /// (tspwp), or a single file (scp).
    #[arg(long = "instance", required = true)]
    instances: Vec<PathBuf>,
}

#[derive(Args)]
struct ParamArgs {
    /// Named parameter preset (mstsp2, mstsp3, tspwp, moscp2, moscp3).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    generations: Option<usize>,
    /// Number of weight vectors K; must be a simplex-lattice size.
    #[arg(long, conflicts_with = "granularity")]
    weights: Option<usize>,
    /// Lattice granularity H (K = C(H+J-1, J-1)).
    #[arg(long)]
    granularity: Option<usize>,
    #[arg(long)]
    expected_rank: Option<f64>,
    #[arg(long)]
    neigh: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    nr: Option<usize>,
    #[arg(long)]
    scalarizer: Option<ScalarizerKind>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    method: Method,
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Archive CSV destination.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum RefMode {
    Union,
    Explicit,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "archive", required = true)]
    archives: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "union")]
    ref_mode: RefMode,
    /// Ideal point for R, comma separated (explicit mode).
    #[arg(long)]
    ref_r: Option<String>,
    /// Hypervolume reference point, comma separated (explicit mode).
    #[arg(long)]
    ref_hv: Option<String>,
    /// Minimum number of R-measure weight vectors (default 1000 for two
    /// objectives, 7626 for three).
    #[arg(long)]
    r_weights: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long = "results", required = true)]
    results: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long = "results", required = true)]
    results: Vec<PathBuf>,
    #[arg(long, value_enum)]
    indicator: Option<IndicatorArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IndicatorArg {
    R,
    Hv,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    problem: ProblemKind,
    /// `name=file[,file...]`; repeat for several instances.
    #[arg(long = "instance-set", required = true)]
    instance_sets: Vec<String>,
    /// Comma-separated methods, or `all`.
    #[arg(long, default_value = "all")]
    methods: String,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 10)]
    replications: usize,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    /// Use the per-instance expected-rank presets when names match.
    #[arg(long)]
    instance_expected_rank: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Eval(a) => eval(a),
        Command::Compare(a) => compare(a),
        Command::Table(a) => table(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    match a.kind {
        GenKind::Euclidean => write_tsp_coordinates(&a.out, &euclidean_points(a.n, a.range, &mut rng))?,
        GenKind::Cluster => write_tsp_coordinates(&a.out, &cluster_points(a.n, a.clusters, a.range, &mut rng)?.points)?,
        GenKind::Profits => write_profits(&a.out, &random_profits(a.n, (a.min, a.max), &mut rng)?)?,
        GenKind::Scp => write_scp(
            &a.out,
            &random_scp(a.rows, a.cols, a.objectives, a.density, (a.min, a.max), &mut rng)?,
        )?,
        GenKind::Scp3 => {
            let (Some(first), Some(second)) = (&a.first, &a.second) else {
                return Err(Error::Config("scp3 needs --first and --second".into()));
            };
            write_scp(&a.out, &combine_scp3(&load_scp(first)?, &load_scp(second)?)?)?
        }
    }
    println!("wrote {}", a.out.display());
    Ok(())
}

/// Builds a method configuration: preset (or problem defaults), then
/// explicit overrides.
fn build_config(method: Method, problem: ProblemKind, objectives: usize, p: &ParamArgs) -> Result<MethodConfig> {
    let mut c = match &p.preset {
        Some(name) => {
            let preset = ParameterPreset::by_name(name)?;
            if preset.problem != problem || preset.objectives != objectives {
                return Err(Error::Config(format!(
                    "preset `{}` is for {}-objective {} instances",
                    preset.name, preset.objectives, preset.problem
                )));
            }
            preset.config(method)
        }
        None => {
            let mut c = MethodConfig::new(method, objectives, 100);
            c.scalarizer = default_scalarizer(problem);
            c
        }
    };
    if let Some(g) = p.generations {
        c.generations = g;
    }
    if let Some(k) = p.weights {
        c.weight_granularity = granularity_for_count(objectives, k).ok_or_else(|| {
            let h = granularity_at_least(objectives, k);
            Error::Config(format!(
                "{k} is not a simplex-lattice size for {objectives} objectives (nearest: {} or {})",
                lattice_size(objectives, h.saturating_sub(1).max(1)),
                lattice_size(objectives, h)
            ))
        })?;
    }
    if let Some(h) = p.granularity {
        c.weight_granularity = h;
    }
    if let Some(er) = p.expected_rank {
        c.expected_rank = er;
    }
    if let Some(n) = p.neigh {
        c.neighborhood_size = n;
    }
    if let Some(d) = p.delta {
        c.mating_probability = d;
    }
    if let Some(nr) = p.nr {
        c.max_replacements = nr;
    }
    if let Some(kind) = p.scalarizer {
        c.scalarizer = ScalarizerSpec::of_kind(kind);
    }
    c.validate()?;
    Ok(c)
}

fn run(a: RunArgs) -> Result<()> {
    let spec = InstanceSpec::new(a.problem.problem, a.problem.instances.clone());
    let inst = spec.load()?;
    let mut config = build_config(a.method, a.problem.problem, inst.num_objectives(), &a.params)?;
    config.seed = a.seed;
    if a.params.expected_rank.is_none() && a.params.preset.is_some() {
        config.expected_rank = expected_rank_for(&spec.name);
    }
    let out = inst.run(&config)?;
    let points: Vec<&ObjectivePoint> = out.points.iter().collect();
    write_points_csv(&a.out, config.objectives, &points)?;
    println!(
        "{} on {}: {} nondominated points, {} iterations ({} local searches, {} recombinations), {} ms",
        config.method,
        spec.name,
        out.points.len(),
        out.iteration_count,
        out.local_search_runs,
        out.recombinations,
        out.wallclock.as_millis()
    );
    Ok(())
}

fn parse_point(text: &str, what: &str) -> Result<ObjectivePoint> {
    let values = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Config(format!("{what}: bad value `{t}`: {e}"))))
        .collect::<Result<Vec<f64>>>()?;
    ObjectivePoint::new(values)
}

fn eval(a: EvalArgs) -> Result<()> {
    let sets = a
        .archives
        .iter()
        .map(|p| read_points_csv(p))
        .collect::<Result<Vec<_>>>()?;
    let j = sets.iter().flatten().next().map_or(0, ObjectivePoint::dim);
    if j == 0 {
        return Err(Error::Config("archives contain no points".into()));
    }
    let weights = match a.r_weights {
        Some(count) => generate_uniform_weights(j, granularity_at_least(j, count))?,
        None => r_weights(j)?,
    };
    let cfg = match a.ref_mode {
        RefMode::Union => {
            let slices: Vec<&[ObjectivePoint]> = sets.iter().map(Vec::as_slice).collect();
            let mut c = IndicatorConfig::from_union(&slices)?;
            c.r_weights = weights;
            c
        }
        RefMode::Explicit => {
            let (Some(r), Some(hv)) = (&a.ref_r, &a.ref_hv) else {
                return Err(Error::Config("explicit mode needs --ref-r and --ref-hv".into()));
            };
            IndicatorConfig::explicit(parse_point(r, "--ref-r")?, parse_point(hv, "--ref-hv")?, weights)?
        }
    };
    println!("archive,points,R,HV");
    for (path, points) in a.archives.iter().zip(&sets) {
        let r = cfg.r_measure(points)?;
        let hv = cfg.hypervolume(points)?;
        println!(
            "{},{},{},{}",
            path.display(),
            points.len(),
            format_significant(r, INDICATOR_DIGITS),
            format_significant(hv, INDICATOR_DIGITS)
        );
    }
    Ok(())
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<sfmoea::harness::ResultRecord>> {
    let mut records = Vec::new();
    for p in paths {
        records.extend(read_results_csv(p)?);
    }
    if records.is_empty() {
        return Err(Error::Config("no result records".into()));
    }
    Ok(records)
}

fn compare(a: CompareArgs) -> Result<()> {
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", a.alpha)));
    }
    let records = read_all(&a.results)?;
    let summaries = summarize(&records);
    let comparisons = compare_methods(&records, a.alpha)?;
    print!("{}", render_report(&summaries, &comparisons, None, a.alpha));
    Ok(())
}

fn table(a: TableArgs) -> Result<()> {
    let records = read_all(&a.results)?;
    let summaries = summarize(&records);
    let indicators: Vec<Indicator> = match a.indicator {
        Some(IndicatorArg::R) => vec![Indicator::R],
        Some(IndicatorArg::Hv) => vec![Indicator::Hv],
        None => Indicator::ALL.to_vec(),
    };
    for (k, ind) in indicators.into_iter().enumerate() {
        if k > 0 {
            println!();
        }
        print!("{}", render_table(&summaries, ind, None));
    }
    Ok(())
}

fn parse_instance_set(problem: ProblemKind, text: &str) -> Result<InstanceSpec> {
    let (name, files) = text
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("--instance-set `{text}` must look like name=file[,file...]")))?;
    let files: Vec<PathBuf> = files.split(',').map(|f| Path::new(f.trim()).to_path_buf()).collect();
    Ok(InstanceSpec::new(problem, files).named(name.trim()))
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let instances = a
        .instance_sets
        .iter()
        .map(|s| parse_instance_set(a.problem, s))
        .collect::<Result<Vec<_>>>()?;
    let methods = if a.methods.eq_ignore_ascii_case("all") {
        Method::ALL.to_vec()
    } else {
        a.methods.split(',').map(|m| m.trim().parse()).collect::<Result<Vec<Method>>>()?
    };
    let objectives = instances[0].load()?.num_objectives();
    let template = build_config(methods[0], a.problem, objectives, &a.params)?;
    let mut plan = ExperimentPlan::new(instances, methods, template);
    plan.replications = a.replications;
    plan.seed_base = a.seed_base;
    plan.instance_expected_rank = a.instance_expected_rank;
    plan.workers = a.workers;
    plan.alpha = a.alpha;
    let report = run_experiment(&plan)?;
    report.write(&a.out)?;
    print!("{}", report.report_text());
    println!("results written to {}", a.out.display());
    Ok(())
}
