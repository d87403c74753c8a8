mod lp_solve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde_json::{json, Value};

use vsr_core::experiment::{
    default_jobs, experiment1_csv, experiment1_summary_csv, experiment2_csv, experiment2_curves_csv,
    instance_seed, regret_curve, run_experiment1, run_experiment2, summarize_experiment1, ExperimentInstance,
    ExperimentOptions, ExperimentPlan, DEFAULT_BASELINES, DEFAULT_CURVE_GRID,
};
use vsr_core::instances::{
    load_instance, save_instance, CostType, GeneratorConfig, GeneratorKind, InstanceDocument,
};
use vsr_core::master::{
    algorithm1, solve_minmax_regret_fixed, Algorithm1Options, EnumerationBackend, ExternalBackend,
    Formulation, HighsBackend, SolverBackend, DEFAULT_EPSILON,
};
use vsr_core::minmax::{compromise_ellipsoid_minmax, compromise_interval_minmax};
use vsr_core::model::{BinarySolution, WeightFunction};
use vsr_core::problems::{CombinatorialProblem, Instance};

#[derive(Parser)]
#[command(name = "vsr", version, about = "Compromise solutions under uncertainty sets of varying size")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded random instances as JSON files.
    Generate(GenerateArgs),
    /// Solve one instance.
    Solve(SolveArgs),
    /// Regret of several solutions over a grid of uncertainty sizes, as CSV.
    Curve(CurveArgs),
    /// Compromise solver statistics over a grid of generated instances.
    Experiment1(Experiment1Args),
    /// Compromise solution against fixed-size min-max regret solutions.
    Experiment2(Experiment2Args),
    /// Solve a CPLEX-LP file with HiGHS and write its solution file.
    LpSolve(LpSolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Layered,
    TwoPath,
    BicriteriaTransform,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendChoice {
    /// Exhaustive enumeration; small instances only.
    Enum,
    /// Command from VSR_SOLVER_CMD (or --solver-cmd) reading a CPLEX-LP file.
    External,
    /// In-process HiGHS.
    Highs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulationChoice {
    Auto,
    General,
    DualSp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Minimize the weighted integral of the regret.
    CompromiseRegret,
    /// Minimize the weighted integral of the worst-case cost.
    CompromiseMinmax,
    /// Min-max regret at the single size --lambda.
    Regret,
}

#[derive(Args, Clone)]
struct SolverFlags {
    #[arg(long, value_enum, default_value = "highs")]
    backend: BackendChoice,
    /// Overrides VSR_SOLVER_CMD for the external backend.
    #[arg(long)]
    solver_cmd: Option<String>,
    /// Relative optimality gap at which row generation stops.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "auto")]
    formulation: FormulationChoice,
    /// Piecewise linear weight as `λ:w` breakpoints, e.g. `0:1,1:1`.
    #[arg(long, default_value = "0:1,1:1")]
    weight: String,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Number of layers N (layered families).
    #[arg(long)]
    layers: Option<usize>,
    /// Nodes per layer k (layered families).
    #[arg(long)]
    width: Option<usize>,
    /// Cost type A or B (layered).
    #[arg(long, default_value = "A", value_parser = parse_cost_type)]
    costs: CostType,
    /// Nodes per path L (two-path).
    #[arg(long)]
    length: Option<usize>,
    /// Diagonal density d (two-path).
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "compromise-regret")]
    mode: Mode,
    /// Uncertainty size for `--mode regret`.
    #[arg(long)]
    lambda: Option<f64>,
    /// JSON matrix (list of rows, one per element) for ellipsoidal min-max.
    #[arg(long)]
    ellipsoid: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
    /// Write a JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    instance: PathBuf,
    /// Solutions as `label=0110`, `label=@report.json`, `nominal` or a bare bit string.
    #[arg(long = "solution")]
    solutions: Vec<String>,
    /// Do not prepend the compromise solution; differences are then taken
    /// against the first listed solution.
    #[arg(long)]
    no_compromise: bool,
    #[arg(long, default_value_t = DEFAULT_CURVE_GRID)]
    grid: usize,
    #[command(flatten)]
    solver: SolverFlags,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridFlags {
    /// Instance files to run instead of a generated grid.
    #[arg(long = "instance")]
    instances: Vec<PathBuf>,
    /// Layered layer counts N; empty for none.
    #[arg(long, default_value = "5,10,15")]
    layers: String,
    /// Layered widths k.
    #[arg(long, default_value = "5,10")]
    widths: String,
    /// Layered cost types.
    #[arg(long, default_value = "A,B")]
    costs: String,
    /// Two-path lengths L; empty for none.
    #[arg(long, default_value = "50,150")]
    lengths: String,
    /// Two-path densities d.
    #[arg(long, default_value = "0.05,0.1")]
    densities: String,
    #[arg(long, default_value_t = 20)]
    per_cell: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Leave wall-clock columns out of the CSV files.
    #[arg(long)]
    no_timings: bool,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct Experiment1Args {
    #[command(flatten)]
    grid: GridFlags,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct Experiment2Args {
    #[command(flatten)]
    grid: GridFlags,
    #[command(flatten)]
    solver: SolverFlags,
    /// Sizes of the fixed-size baselines.
    #[arg(long, default_value = "0,0.3,0.5,0.7,1")]
    lambdas: String,
    #[arg(long, default_value_t = DEFAULT_CURVE_GRID)]
    curve_grid: usize,
}

#[derive(Args)]
struct LpSolveArgs {
    model: PathBuf,
    solution: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

type CliResult<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Experiment1(a) => cmd_experiment1(a),
        Command::Experiment2(a) => cmd_experiment2(a),
        Command::LpSolve(a) => cmd_lp_solve(a),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn parse_cost_type(s: &str) -> CliResult<CostType> {
    match s.trim() {
        "A" | "a" => Ok(CostType::A),
        "B" | "b" => Ok(CostType::B),
        other => Err(format!("unknown cost type '{other}', expected A or B")),
    }
}

fn parse_list<T>(s: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> CliResult<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse(t).ok_or_else(|| format!("invalid {what} '{t}'")))
        .collect()
}

fn parse_weight(s: &str) -> CliResult<WeightFunction> {
    let points = parse_list(s, "weight breakpoint", |t| {
        let (l, w) = t.split_once(':')?;
        Some((l.trim().parse().ok()?, w.trim().parse().ok()?))
    })?;
    WeightFunction::new(points).map_err(|e| e.to_string())
}

fn make_backend(flags: &SolverFlags) -> CliResult<Box<dyn SolverBackend>> {
    Ok(match flags.backend {
        BackendChoice::Enum => Box::new(EnumerationBackend::default()),
        BackendChoice::External => match &flags.solver_cmd {
            Some(cmd) => Box::new(ExternalBackend::new(cmd.clone())),
            None => Box::new(ExternalBackend::from_env().map_err(|e| e.to_string())?),
        },
        BackendChoice::Highs => Box::new(HighsBackend::default()),
    })
}

fn backend_name(flags: &SolverFlags) -> &'static str {
    match flags.backend {
        BackendChoice::Enum => "enum",
        BackendChoice::External => "external",
        BackendChoice::Highs => "highs",
    }
}

fn formulation_for(choice: FormulationChoice, instance: &Instance) -> Formulation {
    match choice {
        FormulationChoice::Auto => Formulation::default_for(instance),
        FormulationChoice::General => Formulation::General,
        FormulationChoice::DualSp => Formulation::DualSp,
    }
}

fn load(path: &Path) -> CliResult<InstanceDocument> {
    load_instance(path).map_err(|e| e.to_string())
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn write_json(path: &Path, value: &Value) -> CliResult<()> {
    write_file(path, &(serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"))
}

fn versions() -> Value {
    json!({ "vsr": env!("CARGO_PKG_VERSION"), "highs": lp_solve::highs_version() })
}

fn generator_kind(a: &GenerateArgs) -> CliResult<GeneratorKind> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| format!("--{flag} is required for this family"));
    Ok(match a.family {
        Family::Layered => GeneratorKind::Layered {
            layers: need(a.layers, "layers")?,
            width: need(a.width, "width")?,
            costs: a.costs,
        },
        Family::TwoPath => GeneratorKind::TwoPath {
            length: need(a.length, "length")?,
            density: a.density.ok_or("--density is required for this family")?,
        },
        Family::BicriteriaTransform => GeneratorKind::BicriteriaTransform {
            layers: need(a.layers, "layers")?,
            width: need(a.width, "width")?,
        },
    })
}

fn file_stem(kind: &GeneratorKind) -> String {
    match kind {
        GeneratorKind::Layered { layers, width, costs } => format!("layered_N{layers}_k{width}_{costs:?}"),
        GeneratorKind::TwoPath { length, density } => format!("twopath_L{length}_d{density}"),
        GeneratorKind::BicriteriaTransform { layers, width } => format!("bicriteria_N{layers}_k{width}"),
    }
}

fn cmd_generate(a: GenerateArgs) -> CliResult<ExitCode> {
    let kind = generator_kind(&a)?;
    GeneratorConfig { kind, seed: a.seed }.validate().map_err(|e| e.to_string())?;
    if a.count > 0 {
        fs::create_dir_all(&a.out_dir).map_err(|e| format!("cannot create {}: {e}", a.out_dir.display()))?;
    }
    for i in 0..a.count {
        let config = GeneratorConfig {
            kind,
            seed: instance_seed(a.seed, 0, i),
        };
        let graph = config.generate().map_err(|e| e.to_string())?;
        let path = a.out_dir.join(format!("{}_{i:04}.json", file_stem(&kind)));
        save_instance(&path, &InstanceDocument::generated(graph, config)).map_err(|e| e.to_string())?;
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn read_ellipsoid(path: &Path, n: usize) -> CliResult<DMatrix<f64>> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(&text).map_err(|e| format!("{}: expected a list of rows: {e}", path.display()))?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.len() != n || rows.iter().any(|r| r.len() != cols) {
        return Err(format!("{}: need {n} rows of equal length", path.display()));
    }
    Ok(DMatrix::from_fn(n, cols, |i, j| rows[i][j]))
}

fn cmd_solve(a: SolveArgs) -> CliResult<ExitCode> {
    let doc = load(&a.instance)?;
    let instance = doc.instance;
    let w = parse_weight(&a.solver.weight)?;
    let start = Instant::now();
    let mut report = json!({
        "instance": a.instance.display().to_string(),
        "kind": instance.kind_name(),
        "versions": versions(),
    });
    let x = match a.mode {
        Mode::CompromiseRegret => {
            let backend = make_backend(&a.solver)?;
            let options = Algorithm1Options {
                epsilon: a.solver.epsilon,
                ..Algorithm1Options::new(formulation_for(a.solver.formulation, &instance))
            };
            let result = algorithm1(&instance, &w, backend.as_ref(), &options).map_err(|f| f.to_string())?;
            println!("k\tLB\tUB\tbest UB\t|Λ̄|\t|Y|\tseconds");
            for it in &result.state.iterations {
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
                    it.k, it.lower_bound, it.upper_bound, it.best_upper_bound, it.lambda_count, it.witness_count, it.seconds
                );
            }
            println!("val = {}", result.val);
            report["mode"] = json!("compromise-regret");
            report["backend"] = json!(backend_name(&a.solver));
            report["formulation"] = json!(options.formulation);
            report["epsilon"] = json!(a.solver.epsilon);
            report["val"] = json!(result.val);
            report["changepoints"] = json!(result.evaluation.changepoints);
            report["iterations"] = json!(result.state.iterations);
            report["lambda_set"] = json!(result.state.lambda_set);
            result.x
        }
        Mode::CompromiseMinmax => {
            let (x, value) = match &a.ellipsoid {
                None => compromise_interval_minmax(&instance, &w).map_err(|e| e.to_string())?,
                Some(path) => {
                    let c = read_ellipsoid(path, instance.dimension())?;
                    let (x, value, reduction) =
                        compromise_ellipsoid_minmax(&instance, &c, &w).map_err(|e| e.to_string())?;
                    println!("equivalent size λ′ = {}", reduction.lambda_prime);
                    report["lambda_prime"] = json!(reduction.lambda_prime);
                    (x, value)
                }
            };
            println!("objective = {value}");
            report["mode"] = json!("compromise-minmax");
            report["uncertainty"] = json!(if a.ellipsoid.is_some() { "ellipsoid" } else { "interval" });
            report["objective"] = json!(value);
            x
        }
        Mode::Regret => {
            let lambda = a.lambda.ok_or("--mode regret needs --lambda")?;
            let backend = make_backend(&a.solver)?;
            let formulation = formulation_for(a.solver.formulation, &instance);
            let (x, regret) = solve_minmax_regret_fixed(&instance, lambda, backend.as_ref(), formulation, a.solver.epsilon)
                .map_err(|e| e.to_string())?;
            println!("regret at λ={lambda} = {regret}");
            report["mode"] = json!("regret");
            report["backend"] = json!(backend_name(&a.solver));
            report["lambda"] = json!(lambda);
            report["regret"] = json!(regret);
            x
        }
    };
    println!("x = {x}");
    println!("selected = {:?}", x.ones());
    report["x"] = json!(x);
    report["selected"] = json!(x.ones());
    report["seconds"] = json!(start.elapsed().as_secs_f64());
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_solution_spec(spec: &str, index: usize, instance: &Instance) -> CliResult<(String, BinarySolution)> {
    let (label, body) = match spec.split_once('=') {
        Some((l, b)) => (l.to_string(), b),
        None if spec == "nominal" => ("nominal".to_string(), spec),
        None => (format!("s{index}"), spec),
    };
    let x = if body == "nominal" {
        instance.solve_nominal(instance.nominal().values()).map_err(|e| e.to_string())?.0
    } else if let Some(path) = body.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        let report: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
        let bits = report["x"].as_str().ok_or_else(|| format!("{path}: no \"x\" bit string"))?;
        bits.parse().map_err(|e| format!("{path}: {e}"))?
    } else {
        body.parse().map_err(|e| format!("solution '{label}': {e}"))?
    };
    if x.len() != instance.dimension() {
        return Err(format!(
            "solution '{label}' has {} entries, the instance has {}",
            x.len(),
            instance.dimension()
        ));
    }
    Ok((label, x))
}

fn cmd_curve(a: CurveArgs) -> CliResult<ExitCode> {
    let instance = load(&a.instance)?.instance;
    let w = parse_weight(&a.solver.weight)?;
    let mut solutions = Vec::new();
    if !a.no_compromise {
        let backend = make_backend(&a.solver)?;
        let options = Algorithm1Options {
            epsilon: a.solver.epsilon,
            ..Algorithm1Options::new(formulation_for(a.solver.formulation, &instance))
        };
        let result = algorithm1(&instance, &w, backend.as_ref(), &options).map_err(|f| f.to_string())?;
        solutions.push(("compromise".to_string(), result.x));
    }
    for (i, spec) in a.solutions.iter().enumerate() {
        solutions.push(parse_solution_spec(spec, i, &instance)?);
    }
    if solutions.is_empty() {
        return Err("no solutions to compare".into());
    }
    let curve = regret_curve(&instance, &solutions, 0, w.range(), a.grid).map_err(|e| e.to_string())?;
    let csv = curve.to_csv();
    match &a.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment_items(g: &GridFlags) -> CliResult<(Vec<ExperimentInstance>, Value)> {
    if !g.instances.is_empty() {
        let mut items = Vec::new();
        for path in &g.instances {
            let id = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
            items.push(ExperimentInstance::from_document(id, load(path)?));
        }
        let files: Vec<String> = g.instances.iter().map(|p| p.display().to_string()).collect();
        return Ok((items, json!({ "files": files })));
    }
    let layers = parse_list(&g.layers, "layer count", |t| t.parse().ok())?;
    let widths = parse_list(&g.widths, "width", |t| t.parse().ok())?;
    let costs = parse_list(&g.costs, "cost type", |t| parse_cost_type(t).ok())?;
    let lengths = parse_list(&g.lengths, "length", |t| t.parse().ok())?;
    let densities = parse_list(&g.densities, "density", |t| t.parse().ok())?;
    let mut cells = Vec::new();
    for &c in &costs {
        for &n in &layers {
            for &k in &widths {
                cells.push(GeneratorKind::Layered { layers: n, width: k, costs: c });
            }
        }
    }
    for &l in &lengths {
        for &d in &densities {
            cells.push(GeneratorKind::TwoPath { length: l, density: d });
        }
    }
    let plan = ExperimentPlan {
        cells,
        instances_per_cell: g.per_cell,
        base_seed: g.seed,
    };
    for kind in &plan.cells {
        GeneratorConfig { kind: *kind, seed: 0 }.validate().map_err(|e| e.to_string())?;
    }
    let seeds: Vec<Value> = plan.configs().iter().map(|(id, c)| json!({ "id": id, "seed": c.seed })).collect();
    let items = plan.materialize().map_err(|e| e.to_string())?;
    Ok((items, json!({ "plan": plan, "seeds": seeds })))
}

fn experiment_options(g: &GridFlags, s: &SolverFlags) -> CliResult<ExperimentOptions> {
    Ok(ExperimentOptions {
        weight: parse_weight(&s.weight)?,
        epsilon: s.epsilon,
        formulation: match s.formulation {
            FormulationChoice::Auto => None,
            FormulationChoice::General => Some(Formulation::General),
            FormulationChoice::DualSp => Some(Formulation::DualSp),
        },
        jobs: g.jobs.unwrap_or_else(default_jobs),
        timings: !g.no_timings,
        ..ExperimentOptions::default()
    })
}

fn manifest(command: &str, g: &GridFlags, s: &SolverFlags, options: &ExperimentOptions, source: Value) -> Value {
    json!({
        "command": command,
        "versions": versions(),
        "backend": backend_name(s),
        "epsilon": s.epsilon,
        "weight": options.weight.breakpoints(),
        "jobs": options.jobs,
        "base_seed": g.seed,
        "instances": source,
    })
}

fn prepare_out_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))
}

fn cmd_experiment1(a: Experiment1Args) -> CliResult<ExitCode> {
    let (items, source) = experiment_items(&a.grid)?;
    let options = experiment_options(&a.grid, &a.solver)?;
    let backend = make_backend(&a.solver)?;
    prepare_out_dir(&a.grid.out_dir)?;
    let start = Instant::now();
    let rows = run_experiment1(&items, backend.as_ref(), &options);
    let elapsed = start.elapsed().as_secs_f64();
    let summaries = summarize_experiment1(&rows);
    write_file(&a.grid.out_dir.join("experiment1_instances.csv"), &experiment1_csv(&rows, &options))?;
    write_file(&a.grid.out_dir.join("experiment1_summary.csv"), &experiment1_summary_csv(&summaries, &options))?;
    let failed: Vec<&str> = rows.iter().filter(|r| !r.solved()).map(|r| r.instance_id.as_str()).collect();
    let mut m = manifest("experiment1", &a.grid, &a.solver, &options, source);
    m["elapsed_seconds"] = json!(elapsed);
    m["timings"] = json!(rows.iter().map(|r| json!({ "id": r.instance_id, "seconds": r.seconds })).collect::<Vec<_>>());
    m["failed"] = json!(failed);
    write_json(&a.grid.out_dir.join("manifest.json"), &m)?;
    println!("{} instances, {} failed, {:.1}s", rows.len(), failed.len(), elapsed);
    for f in &failed {
        eprintln!("failed: {f}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment2(a: Experiment2Args) -> CliResult<ExitCode> {
    let (items, source) = experiment_items(&a.grid)?;
    let mut options = experiment_options(&a.grid, &a.solver)?;
    options.baselines = parse_list(&a.lambdas, "baseline size", |t| t.parse().ok())?;
    if options.baselines.is_empty() {
        options.baselines = DEFAULT_BASELINES.to_vec();
    }
    options.grid = a.curve_grid;
    let backend = make_backend(&a.solver)?;
    prepare_out_dir(&a.grid.out_dir)?;
    let start = Instant::now();
    let rows = run_experiment2(&items, backend.as_ref(), &options);
    let elapsed = start.elapsed().as_secs_f64();
    write_file(&a.grid.out_dir.join("experiment2_solutions.csv"), &experiment2_csv(&rows))?;
    write_file(&a.grid.out_dir.join("experiment2_curves.csv"), &experiment2_curves_csv(&rows, &options))?;
    let failed: Vec<&str> = rows.iter().filter(|r| !r.solved()).map(|r| r.instance_id.as_str()).collect();
    let violations: Vec<&str> =
        rows.iter().filter(|r| r.solved() && !r.checks_hold()).map(|r| r.instance_id.as_str()).collect();
    let mut m = manifest("experiment2", &a.grid, &a.solver, &options, source);
    m["baselines"] = json!(options.baselines);
    m["elapsed_seconds"] = json!(elapsed);
    m["failed"] = json!(failed);
    m["dominance_violations"] = json!(violations);
    write_json(&a.grid.out_dir.join("manifest.json"), &m)?;
    println!(
        "{} instances, {} failed, {} dominance violations, {:.1}s",
        rows.len(),
        failed.len(),
        violations.len(),
        elapsed
    );
    if violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for v in &violations {
            eprintln!("dominance violated: {v}");
        }
        Ok(ExitCode::from(3))
    }
}

fn cmd_lp_solve(a: LpSolveArgs) -> CliResult<ExitCode> {
    let status = lp_solve::solve_lp_file(&a.model, &a.solution, a.threads)?;
    eprintln!("{status}");
    Ok(ExitCode::SUCCESS)
}
