//! Batch runs over generated or loaded instances: regret curves, timing and
//! iteration tables for the compromise solver, and comparisons against fixed-size
//! min-max regret solutions.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{CostType, GeneratorConfig, GeneratorKind, InstanceDocument};
use crate::master::{
    algorithm1, solve_minmax_regret_fixed, Algorithm1Options, Formulation, IterationRecord,
    SolverBackend, DEFAULT_EPSILON,
};
use crate::model::{BinarySolution, LambdaInterval, WeightFunction};
use crate::problems::{CombinatorialProblem, Instance};
use crate::regret::{compute_val, regret_at};
use crate::rng::SplitMix64;

pub const DEFAULT_CURVE_GRID: usize = 101;
pub const DEFAULT_BASELINES: [f64; 5] = [0.0, 0.3, 0.5, 0.7, 1.0];
/// Absolute slack for the dominance checks of [`run_experiment2`].
pub const DOMINANCE_TOLERANCE: f64 = 1e-6;

/// `m` equally spaced points from `range.lo()` to `range.hi()`.
pub fn uniform_grid(range: LambdaInterval, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![range.lo()],
        _ => (0..m)
            .map(|i| {
                if i == m - 1 {
                    range.hi()
                } else {
                    range.lo() + range.width() * i as f64 / (m - 1) as f64
                }
            })
            .collect(),
    }
}

/// Regret of several solutions on a grid of sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretCurve {
    pub lambdas: Vec<f64>,
    pub labels: Vec<String>,
    /// `regrets[s][g]` is the regret of solution `s` at `lambdas[g]`.
    pub regrets: Vec<Vec<f64>>,
    /// Index of the solution the differences are taken against.
    pub baseline: usize,
}

impl RegretCurve {
    /// `reg(solution) − reg(baseline)` at grid point `g`.
    pub fn difference(&self, solution: usize, g: usize) -> f64 {
        self.regrets[solution][g] - self.regrets[self.baseline][g]
    }

    /// Trapezoid approximation of `∫ w·reg` for every solution.
    pub fn weighted_integrals(&self, w: &WeightFunction) -> Vec<f64> {
        self.regrets
            .iter()
            .map(|row| {
                self.lambdas
                    .windows(2)
                    .zip(row.windows(2))
                    .map(|(l, r)| 0.5 * (l[1] - l[0]) * (w.eval(l[0]) * r[0] + w.eval(l[1]) * r[1]))
                    .sum()
            })
            .collect()
    }

    /// Columns `lambda`, `regret_<label>` per solution, `diff_<label>` per solution.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["lambda".to_string()];
        header.extend(self.labels.iter().map(|l| format!("regret_{l}")));
        header.extend(self.labels.iter().map(|l| format!("diff_{l}")));
        let mut table = CsvTable::new(header);
        for (g, lambda) in self.lambdas.iter().enumerate() {
            let mut row = vec![num(*lambda)];
            row.extend(self.regrets.iter().map(|r| num(r[g])));
            row.extend((0..self.labels.len()).map(|s| num(self.difference(s, g))));
            table.push(row);
        }
        table.finish()
    }
}

/// Regret of each labelled solution at `grid` points of `range`.
pub fn regret_curve(
    instance: &Instance,
    solutions: &[(String, BinarySolution)],
    baseline: usize,
    range: LambdaInterval,
    grid: usize,
) -> Result<RegretCurve> {
    if baseline >= solutions.len() {
        return Err(Error::Usage(format!(
            "baseline index {baseline} out of range for {} solutions",
            solutions.len()
        )));
    }
    for (label, x) in solutions {
        instance
            .require_feasible(x)
            .map_err(|e| Error::Feasibility(format!("solution '{label}': {e}")))?;
    }
    let lambdas = uniform_grid(range, grid);
    let regrets = solutions
        .iter()
        .map(|(_, x)| lambdas.iter().map(|&l| regret_at(instance, x, l).map(|r| r.0)).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(RegretCurve {
        lambdas,
        labels: solutions.iter().map(|(l, _)| l.clone()).collect(),
        regrets,
        baseline,
    })
}

/// One instance of a batch run.
#[derive(Debug, Clone)]
pub struct ExperimentInstance {
    /// Sort key and row label.
    pub id: String,
    /// Generator parameters, used to group instances into cells.
    pub cell: Option<GeneratorKind>,
    pub seed: Option<u64>,
    pub instance: Instance,
}

impl ExperimentInstance {
    pub fn from_document(id: impl Into<String>, doc: InstanceDocument) -> Self {
        ExperimentInstance {
            id: id.into(),
            cell: doc.generator.map(|g| g.kind),
            seed: doc.seed,
            instance: doc.instance,
        }
    }
}

/// `count` seeded instances for each generator cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentPlan {
    pub cells: Vec<GeneratorKind>,
    pub instances_per_cell: usize,
    pub base_seed: u64,
}

impl ExperimentPlan {
    /// Layered `N ∈ {5,10,15}`, `k ∈ {5,10}` for both cost types and two-path
    /// `L ∈ {50,150}`, `d ∈ {0.05,0.10}`.
    pub fn desk(instances_per_cell: usize, base_seed: u64) -> Self {
        let mut cells = Vec::new();
        for costs in [CostType::A, CostType::B] {
            for layers in [5, 10, 15] {
                for width in [5, 10] {
                    cells.push(GeneratorKind::Layered { layers, width, costs });
                }
            }
        }
        for length in [50, 150] {
            for density in [0.05, 0.10] {
                cells.push(GeneratorKind::TwoPath { length, density });
            }
        }
        ExperimentPlan {
            cells,
            instances_per_cell,
            base_seed,
        }
    }

    pub fn configs(&self) -> Vec<(String, GeneratorConfig)> {
        let mut out = Vec::with_capacity(self.cells.len() * self.instances_per_cell);
        for (c, kind) in self.cells.iter().enumerate() {
            for i in 0..self.instances_per_cell {
                let config = GeneratorConfig {
                    kind: *kind,
                    seed: instance_seed(self.base_seed, c, i),
                };
                out.push((format!("c{c:03}-i{i:04}"), config));
            }
        }
        out
    }

    pub fn materialize(&self) -> Result<Vec<ExperimentInstance>> {
        self.configs()
            .into_iter()
            .map(|(id, config)| {
                Ok(ExperimentInstance {
                    id,
                    cell: Some(config.kind),
                    seed: Some(config.seed),
                    instance: config.generate()?.into(),
                })
            })
            .collect()
    }
}

/// Seed of instance `index` in cell `cell` of a plan with base seed `base`.
pub fn instance_seed(base: u64, cell: usize, index: usize) -> u64 {
    let mut rng = SplitMix64::new(base ^ ((cell as u64) << 32) ^ index as u64);
    rng.next_u64()
}

const PARAM_KEYS: [&str; 6] = ["family", "layers", "width", "costs", "length", "density"];

fn cell_params(cell: Option<&GeneratorKind>) -> [String; 6] {
    let mut p: [String; 6] = Default::default();
    match cell {
        None => p[0] = "file".into(),
        Some(GeneratorKind::Layered { layers, width, costs }) => {
            p[0] = "layered".into();
            p[1] = layers.to_string();
            p[2] = width.to_string();
            p[3] = format!("{costs:?}");
        }
        Some(GeneratorKind::TwoPath { length, density }) => {
            p[0] = "two_path".into();
            p[4] = length.to_string();
            p[5] = num(*density);
        }
        Some(GeneratorKind::BicriteriaTransform { layers, width }) => {
            p[0] = "bicriteria_transform".into();
            p[1] = layers.to_string();
            p[2] = width.to_string();
        }
    }
    p
}

/// Runs `f` over `items` on `jobs` worker threads, keeping input order.
pub fn run_parallel<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1).min(items.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every item processed"))
        .collect()
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Debug, Clone)]
pub struct ExperimentOptions {
    pub weight: WeightFunction,
    pub epsilon: f64,
    /// `None` picks the dual formulation for directed shortest path.
    pub formulation: Option<Formulation>,
    pub jobs: usize,
    /// Sizes at which experiment 1 records the compromise solution's regret.
    pub sample_lambdas: Vec<f64>,
    /// Fixed sizes compared in experiment 2.
    pub baselines: Vec<f64>,
    pub grid: usize,
    /// Write wall-clock columns; without them reruns are byte-identical.
    pub timings: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            weight: WeightFunction::uniform(),
            epsilon: DEFAULT_EPSILON,
            formulation: None,
            jobs: default_jobs(),
            sample_lambdas: DEFAULT_BASELINES.to_vec(),
            baselines: DEFAULT_BASELINES.to_vec(),
            grid: DEFAULT_CURVE_GRID,
            timings: true,
        }
    }
}

impl ExperimentOptions {
    fn algorithm(&self, instance: &Instance) -> Algorithm1Options {
        let formulation = self.formulation.unwrap_or_else(|| Formulation::default_for(instance));
        Algorithm1Options {
            epsilon: self.epsilon,
            ..Algorithm1Options::new(formulation)
        }
    }
}

/// Outcome of the compromise solver on one instance.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub instance_id: String,
    pub cell: Option<GeneratorKind>,
    pub seed: Option<u64>,
    pub nodes: Option<usize>,
    pub dimension: usize,
    pub error: Option<String>,
    pub seconds: f64,
    pub iterations: usize,
    pub lambda_count: usize,
    pub val: Option<f64>,
    pub x: Option<BinarySolution>,
    /// `(λ, reg(x, λ))` at the sample sizes.
    pub regret_samples: Vec<(f64, f64)>,
    pub log: Vec<IterationRecord>,
}

impl ExperimentRow {
    pub fn solved(&self) -> bool {
        self.error.is_none()
    }
}

fn solve_one(item: &ExperimentInstance, backend: &dyn SolverBackend, options: &ExperimentOptions) -> ExperimentRow {
    let start = Instant::now();
    let outcome = algorithm1(&item.instance, &options.weight, backend, &options.algorithm(&item.instance));
    let seconds = start.elapsed().as_secs_f64();
    let mut row = ExperimentRow {
        instance_id: item.id.clone(),
        cell: item.cell,
        seed: item.seed,
        nodes: item.instance.as_graph().map(|g| g.node_count()),
        dimension: item.instance.dimension(),
        error: None,
        seconds,
        iterations: 0,
        lambda_count: 0,
        val: None,
        x: None,
        regret_samples: Vec::new(),
        log: Vec::new(),
    };
    match outcome {
        Ok(result) => {
            let samples: Result<Vec<(f64, f64)>> = options
                .sample_lambdas
                .iter()
                .map(|&l| regret_at(&item.instance, &result.x, l).map(|(r, _)| (l, r)))
                .collect();
            match samples {
                Ok(s) => row.regret_samples = s,
                Err(e) => row.error = Some(e.to_string()),
            }
            row.iterations = result.state.iterations.len();
            row.lambda_count = result.state.lambda_set.len();
            row.val = Some(result.val);
            row.x = Some(result.x);
            row.log = result.state.iterations;
        }
        Err(failure) => {
            row.iterations = failure.state.iterations.len();
            row.lambda_count = failure.state.lambda_set.len();
            row.error = Some(failure.to_string());
            row.log = failure.state.iterations;
        }
    }
    row
}

/// Solves the compromise problem on every instance; failures are recorded per row.
/// Rows come back sorted by instance id.
pub fn run_experiment1(
    items: &[ExperimentInstance],
    backend: &dyn SolverBackend,
    options: &ExperimentOptions,
) -> Vec<ExperimentRow> {
    let mut rows = run_parallel(items, options.jobs, |item| solve_one(item, backend, options));
    rows.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
    rows
}

/// One row per instance.
pub fn experiment1_csv(rows: &[ExperimentRow], options: &ExperimentOptions) -> String {
    let mut header: Vec<String> = ["instance_id"].iter().chain(PARAM_KEYS.iter()).map(|s| s.to_string()).collect();
    header.extend(["seed", "nodes", "dimension", "status", "error"].map(String::from));
    if options.timings {
        header.push("seconds".into());
    }
    header.extend(["iterations", "lambda_count", "val"].map(String::from));
    header.extend(options.sample_lambdas.iter().map(|l| format!("regret_{}", num(*l))));
    let mut table = CsvTable::new(header);
    for r in rows {
        let mut row = vec![r.instance_id.clone()];
        row.extend(cell_params(r.cell.as_ref()));
        row.push(opt(r.seed));
        row.push(opt(r.nodes));
        row.push(r.dimension.to_string());
        row.push(if r.solved() { "ok" } else { "failed" }.into());
        row.push(r.error.clone().unwrap_or_default());
        if options.timings {
            row.push(format!("{:.6}", r.seconds));
        }
        row.push(r.iterations.to_string());
        row.push(r.lambda_count.to_string());
        row.push(r.val.map(num).unwrap_or_default());
        for (i, _) in options.sample_lambdas.iter().enumerate() {
            row.push(r.regret_samples.get(i).map(|s| num(s.1)).unwrap_or_default());
        }
        table.push(row);
    }
    table.finish()
}

/// Averages over the solved instances of a group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    /// `"cell"` for a full parameter cell, `"marginal"` when the parameters shown
    /// as `*` are averaged over.
    pub scope: String,
    pub params: [String; 6],
    pub instances: usize,
    pub failed: usize,
    pub mean_seconds: f64,
    pub mean_iterations: f64,
    pub max_iterations: usize,
    pub mean_lambda_count: f64,
}

fn summarize(scope: &str, params: [String; 6], rows: &[&ExperimentRow]) -> CellSummary {
    let solved: Vec<_> = rows.iter().filter(|r| r.solved()).collect();
    let mean = |f: &dyn Fn(&ExperimentRow) -> f64| {
        if solved.is_empty() {
            f64::NAN
        } else {
            solved.iter().map(|r| f(r)).sum::<f64>() / solved.len() as f64
        }
    };
    CellSummary {
        scope: scope.into(),
        params,
        instances: rows.len(),
        failed: rows.len() - solved.len(),
        mean_seconds: mean(&|r| r.seconds),
        mean_iterations: mean(&|r| r.iterations as f64),
        max_iterations: solved.iter().map(|r| r.iterations).max().unwrap_or(0),
        mean_lambda_count: mean(&|r| r.lambda_count as f64),
    }
}

/// Per-cell averages, then for every family and parameter the averages over all
/// instances with that parameter fixed.
pub fn summarize_experiment1(rows: &[ExperimentRow]) -> Vec<CellSummary> {
    let cells = group_in_order(rows.iter().map(|r| (cell_params(r.cell.as_ref()), r)));
    let mut out: Vec<CellSummary> = cells.iter().map(|(p, rs)| summarize("cell", p.clone(), rs)).collect();
    let families = group_in_order(cells.iter().map(|(p, _)| (p[0].clone(), ())));
    for (family, _) in families {
        for key in 1..PARAM_KEYS.len() {
            let groups = group_in_order(
                cells
                    .iter()
                    .filter(|(p, _)| p[0] == family && !p[key].is_empty())
                    .flat_map(|(p, rs)| rs.iter().map(|r| (p[key].clone(), *r))),
            );
            for (value, rs) in groups {
                let mut params: [String; 6] = Default::default();
                params[0] = family.clone();
                for (k, slot) in params.iter_mut().enumerate().skip(1) {
                    let used = cells.iter().any(|(p, _)| p[0] == family && !p[k].is_empty());
                    if k == key {
                        *slot = value.clone();
                    } else if used {
                        *slot = "*".into();
                    }
                }
                out.push(summarize("marginal", params, &rs));
            }
        }
    }
    out
}

pub fn experiment1_summary_csv(summaries: &[CellSummary], options: &ExperimentOptions) -> String {
    let mut header: Vec<String> = ["scope"].iter().chain(PARAM_KEYS.iter()).map(|s| s.to_string()).collect();
    header.extend(["instances", "failed"].map(String::from));
    if options.timings {
        header.push("mean_seconds".into());
    }
    header.extend(["mean_iterations", "max_iterations", "mean_lambda_count"].map(String::from));
    let mut table = CsvTable::new(header);
    for s in summaries {
        let mut row = vec![s.scope.clone()];
        row.extend(s.params.iter().cloned());
        row.push(s.instances.to_string());
        row.push(s.failed.to_string());
        if options.timings {
            row.push(format!("{:.6}", s.mean_seconds));
        }
        row.push(num(s.mean_iterations));
        row.push(s.max_iterations.to_string());
        row.push(num(s.mean_lambda_count));
        table.push(row);
    }
    table.finish()
}

/// A fixed-size min-max regret solution compared with the compromise solution.
#[derive(Debug, Clone, Serialize)]
pub struct BaselineOutcome {
    pub lambda_bar: f64,
    pub x: BinarySolution,
    pub val: f64,
    pub regret_at_lambda_bar: f64,
    pub compromise_regret_at_lambda_bar: f64,
}

impl BaselineOutcome {
    pub fn label(&self) -> String {
        format!("fixed_{}", num(self.lambda_bar))
    }

    /// The compromise solution has no larger `val` than this baseline.
    pub fn dominated_by_compromise(&self, compromise_val: f64) -> bool {
        compromise_val <= self.val + DOMINANCE_TOLERANCE
    }

    /// This baseline has no larger regret than the compromise at its own size.
    pub fn best_at_own_size(&self) -> bool {
        self.regret_at_lambda_bar <= self.compromise_regret_at_lambda_bar + DOMINANCE_TOLERANCE
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub instance_id: String,
    pub cell: Option<GeneratorKind>,
    pub seed: Option<u64>,
    pub error: Option<String>,
    pub compromise: Option<ExperimentRow>,
    pub baselines: Vec<BaselineOutcome>,
    /// Compromise first, then the baselines; differences are against the compromise.
    pub curve: Option<RegretCurve>,
}

impl ComparisonRow {
    pub fn solved(&self) -> bool {
        self.error.is_none()
    }

    pub fn checks_hold(&self) -> bool {
        let Some(val) = self.compromise.as_ref().and_then(|c| c.val) else {
            return false;
        };
        self.baselines
            .iter()
            .all(|b| b.dominated_by_compromise(val) && b.best_at_own_size())
    }
}

fn compare_one(item: &ExperimentInstance, backend: &dyn SolverBackend, options: &ExperimentOptions) -> ComparisonRow {
    let mut row = ComparisonRow {
        instance_id: item.id.clone(),
        cell: item.cell,
        seed: item.seed,
        error: None,
        compromise: None,
        baselines: Vec::new(),
        curve: None,
    };
    let compromise = solve_one(item, backend, options);
    if let Some(e) = &compromise.error {
        row.error = Some(e.clone());
        row.compromise = Some(compromise);
        return row;
    }
    match compare_baselines(item, backend, options, compromise.x.as_ref().expect("solved row has x")) {
        Ok((baselines, curve)) => {
            row.baselines = baselines;
            row.curve = Some(curve);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row.compromise = Some(compromise);
    row
}

fn compare_baselines(
    item: &ExperimentInstance,
    backend: &dyn SolverBackend,
    options: &ExperimentOptions,
    compromise: &BinarySolution,
) -> Result<(Vec<BaselineOutcome>, RegretCurve)> {
    let instance = &item.instance;
    let formulation = options.algorithm(instance).formulation;
    let mut baselines = Vec::new();
    for &lambda_bar in &options.baselines {
        let (x, regret) = solve_minmax_regret_fixed(instance, lambda_bar, backend, formulation, options.epsilon)?;
        let val = compute_val(instance, &x, &options.weight)?.val;
        let (compromise_regret, _) = regret_at(instance, compromise, lambda_bar)?;
        baselines.push(BaselineOutcome {
            lambda_bar,
            x,
            val,
            regret_at_lambda_bar: regret,
            compromise_regret_at_lambda_bar: compromise_regret,
        });
    }
    let mut solutions = vec![("compromise".to_string(), compromise.clone())];
    solutions.extend(baselines.iter().map(|b| (b.label(), b.x.clone())));
    let curve = regret_curve(instance, &solutions, 0, options.weight.range(), options.grid)?;
    Ok((baselines, curve))
}

/// Solves the compromise problem and every fixed-size baseline on each instance.
/// Rows come back sorted by instance id.
pub fn run_experiment2(
    items: &[ExperimentInstance],
    backend: &dyn SolverBackend,
    options: &ExperimentOptions,
) -> Vec<ComparisonRow> {
    let mut rows = run_parallel(items, options.jobs, |item| compare_one(item, backend, options));
    rows.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
    rows
}

/// One row per instance and solution (compromise and each baseline).
pub fn experiment2_csv(rows: &[ComparisonRow]) -> String {
    let mut header: Vec<String> = ["instance_id"].iter().chain(PARAM_KEYS.iter()).map(|s| s.to_string()).collect();
    header.extend(
        [
            "seed",
            "status",
            "error",
            "solution",
            "lambda_bar",
            "val",
            "regret_at_lambda_bar",
            "compromise_regret_at_lambda_bar",
            "compromise_val_not_larger",
            "best_at_own_size",
        ]
        .map(String::from),
    );
    let mut table = CsvTable::new(header);
    for r in rows {
        let prefix = |status: &str, error: &str| {
            let mut row = vec![r.instance_id.clone()];
            row.extend(cell_params(r.cell.as_ref()));
            row.push(opt(r.seed));
            row.push(status.into());
            row.push(error.into());
            row
        };
        if let Some(e) = &r.error {
            let mut row = prefix("failed", e);
            row.extend(std::iter::repeat_n(String::new(), 7));
            table.push(row);
            continue;
        }
        let val = r.compromise.as_ref().and_then(|c| c.val).expect("solved row has val");
        let mut row = prefix("ok", "");
        row.extend(["compromise".into(), String::new(), num(val), String::new(), String::new(), String::new(), String::new()]);
        table.push(row);
        for b in &r.baselines {
            let mut row = prefix("ok", "");
            row.extend([
                b.label(),
                num(b.lambda_bar),
                num(b.val),
                num(b.regret_at_lambda_bar),
                num(b.compromise_regret_at_lambda_bar),
                b.dominated_by_compromise(val).to_string(),
                b.best_at_own_size().to_string(),
            ]);
            table.push(row);
        }
    }
    table.finish()
}

/// Regret differences to the compromise solution averaged over the solved
/// instances of each cell, one row per cell and grid point.
pub fn experiment2_curves_csv(rows: &[ComparisonRow], options: &ExperimentOptions) -> String {
    let labels: Vec<String> = options.baselines.iter().map(|l| format!("fixed_{}", num(*l))).collect();
    let mut header: Vec<String> = PARAM_KEYS.iter().map(|s| s.to_string()).collect();
    header.extend(["instances", "lambda"].map(String::from));
    header.extend(labels.iter().map(|l| format!("diff_{l}")));
    let mut table = CsvTable::new(header);
    let cells = group_in_order(
        rows.iter()
            .filter(|r| r.solved())
            .filter_map(|r| Some((cell_params(r.cell.as_ref()), r.curve.as_ref()?))),
    );
    let grid = uniform_grid(options.weight.range(), options.grid);
    for (params, curves) in cells {
        if curves.is_empty() {
            continue;
        }
        for (g, lambda) in grid.iter().enumerate() {
            let mut row: Vec<String> = params.to_vec();
            row.push(curves.len().to_string());
            row.push(num(*lambda));
            for s in 1..=labels.len() {
                let mean = curves.iter().map(|c| c.difference(s, g)).sum::<f64>() / curves.len() as f64;
                row.push(num(mean));
            }
            table.push(row);
        }
    }
    table.finish()
}

/// Groups values by key, keeping keys in order of first appearance.
fn group_in_order<K: PartialEq, V>(items: impl IntoIterator<Item = (K, V)>) -> Vec<(K, Vec<V>)> {
    let mut groups: Vec<(K, Vec<V>)> = Vec::new();
    for (k, v) in items {
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, vs)) => vs.push(v),
            None => groups.push((k, vec![v])),
        }
    }
    groups
}

/// Shortest round-trip decimal form; integral values without a fraction.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    fn new(header: Vec<String>) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&header).expect("writing to memory");
        CsvTable { writer }
    }

    fn push(&mut self, row: Vec<String>) {
        self.writer.write_record(&row).expect("writing to memory");
    }

    fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("writing to memory");
        String::from_utf8(bytes).expect("fields are UTF-8")
    }
}
