use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::master::backend::{SolveStatus, SolverBackend};
use crate::master::formulation::{
    build_segments, dual_sp_model, general_model, repair_solution, Segment,
};
use crate::master::model::MilpModel;
use crate::model::{BinarySolution, WeightFunction, EPS_LAMBDA};
use crate::problems::{CombinatorialProblem, GraphKind, Instance};
use crate::regret::{compute_val_with, regret_at, EvaluationOptions, EvaluationResult};

pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// Regret cuts against a growing pool of solutions; any problem.
    General,
    /// Shortest path duals; directed shortest path only.
    DualSp,
}

impl Formulation {
    /// The dual formulation for directed shortest path, the general one otherwise.
    pub fn default_for(instance: &Instance) -> Self {
        match instance.as_graph().map(|g| g.kind()) {
            Some(GraphKind::ShortestPath { directed: true, .. }) => Formulation::DualSp,
            _ => Formulation::General,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    pub lower_bound: f64,
    /// `val` of this iteration's master solution.
    pub upper_bound: f64,
    /// Smallest upper bound so far.
    pub best_upper_bound: f64,
    /// `|Λ̄|` used by this iteration's master.
    pub lambda_count: usize,
    pub witness_count: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MasterState {
    /// Sorted changepoint set `Λ̄`.
    pub lambda_set: Vec<f64>,
    /// Pool `𝒴` of regret solutions (general formulation only).
    pub witness_pool: Vec<BinarySolution>,
    pub iterations: Vec<IterationRecord>,
}

impl MasterState {
    /// Checks that lower bounds never decrease and never exceed the upper bound
    /// of their iteration, both up to `tol·(1 + |UB|)`.
    pub fn check_bounds(&self, tol: f64) -> std::result::Result<(), String> {
        for (i, it) in self.iterations.iter().enumerate() {
            let slack = tol * (1.0 + it.upper_bound.abs());
            if it.lower_bound > it.upper_bound + slack {
                return Err(format!("iteration {}: LB {} > UB {}", it.k, it.lower_bound, it.upper_bound));
            }
            if i > 0 && it.lower_bound < self.iterations[i - 1].lower_bound - slack {
                return Err(format!(
                    "iteration {}: LB decreased from {} to {}",
                    it.k,
                    self.iterations[i - 1].lower_bound,
                    it.lower_bound
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Algorithm1Options {
    pub epsilon: f64,
    pub formulation: Formulation,
    pub max_iterations: usize,
    pub evaluation: EvaluationOptions,
}

impl Algorithm1Options {
    pub fn new(formulation: Formulation) -> Self {
        Algorithm1Options {
            epsilon: DEFAULT_EPSILON,
            formulation,
            max_iterations: 1000,
            evaluation: EvaluationOptions::default(),
        }
    }

    pub fn for_instance(instance: &Instance) -> Self {
        Algorithm1Options::new(Formulation::default_for(instance))
    }
}

#[derive(Debug, Clone)]
pub struct Algorithm1Result {
    pub x: BinarySolution,
    pub val: f64,
    pub evaluation: EvaluationResult,
    pub state: MasterState,
}

/// An error from the row generation loop with the state reached so far.
#[derive(Debug)]
pub struct AlgorithmFailure {
    pub error: Error,
    pub state: MasterState,
}

impl fmt::Display for AlgorithmFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (after {} iterations)", self.error, self.state.iterations.len())
    }
}

impl std::error::Error for AlgorithmFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<AlgorithmFailure> for Error {
    fn from(f: AlgorithmFailure) -> Self {
        f.error
    }
}

fn solve_master(model: &MilpModel, instance: &Instance, backend: &dyn SolverBackend) -> Result<(BinarySolution, f64)> {
    let sol = backend.solve(model)?;
    if sol.status == SolveStatus::Infeasible {
        return Err(Error::Infeasible(format!("{} reported the master problem infeasible", backend.name())));
    }
    let x = model.extract_x(&sol.values).expect("master models carry metadata");
    let x = repair_solution(instance, x);
    instance.require_feasible(&x)?;
    Ok((x, sol.objective))
}

fn insert_lambda(set: &mut Vec<f64>, lambda: f64) -> bool {
    let pos = set.partition_point(|&c| c < lambda);
    let near = (pos > 0 && lambda - set[pos - 1] <= EPS_LAMBDA)
        || (pos < set.len() && set[pos] - lambda <= EPS_LAMBDA);
    if near {
        return false;
    }
    set.insert(pos, lambda);
    true
}

/// Exact compromise solution by row generation.
///
/// Starts from `Λ̄ = {midpoint of Λ}`. Each iteration solves the master problem
/// for a lower bound and a candidate `x`, evaluates `val(x)` exactly for an upper
/// bound, and adds the changepoints (and, for the general formulation, regret
/// solutions) of `x`. Stops once the best upper bound is within
/// `ε·(1 + |UB|)` of the lower bound and returns that incumbent.
pub fn algorithm1(
    instance: &Instance,
    w: &WeightFunction,
    backend: &dyn SolverBackend,
    options: &Algorithm1Options,
) -> std::result::Result<Algorithm1Result, AlgorithmFailure> {
    let mut state = MasterState::default();
    match run(instance, w, backend, options, &mut state) {
        Ok((x, evaluation)) => Ok(Algorithm1Result {
            x,
            val: evaluation.val,
            evaluation,
            state,
        }),
        Err(error) => Err(AlgorithmFailure { error, state }),
    }
}

fn run(
    instance: &Instance,
    w: &WeightFunction,
    backend: &dyn SolverBackend,
    options: &Algorithm1Options,
    state: &mut MasterState,
) -> Result<(BinarySolution, EvaluationResult)> {
    if !(options.epsilon > 0.0) {
        return Err(Error::Domain(format!("ε must be positive, got {}", options.epsilon)));
    }
    let range = w.range();
    range.require_interval_shape()?;
    let graph = match options.formulation {
        Formulation::DualSp => Some(instance.as_graph().ok_or_else(|| {
            Error::Usage("the dual formulation needs a shortest path instance".into())
        })?),
        Formulation::General => None,
    };
    state.lambda_set = vec![range.midpoint()];
    if options.formulation == Formulation::General {
        let (nominal, _) = instance.solve_nominal(instance.nominal().values())?;
        state.witness_pool.push(nominal);
    }
    let mut best: Option<(BinarySolution, EvaluationResult)> = None;
    for k in 1..=options.max_iterations {
        let start = Instant::now();
        let segments = build_segments(&state.lambda_set, w)?;
        let model = match graph {
            Some(g) => dual_sp_model(g, segments)?,
            None => general_model(instance, segments, &state.witness_pool)?,
        };
        let (x, lower) = solve_master(&model, instance, backend)?;
        let eval = compute_val_with(instance, &x, w, options.evaluation)?;
        let upper = eval.val;
        let improves = best.as_ref().is_none_or(|(_, b)| upper < b.val);
        let new_lambdas: Vec<f64> = eval.changepoints.clone();
        let new_witnesses = eval.witnesses.clone();
        if improves {
            best = Some((x, eval));
        }
        let best_upper = best.as_ref().map(|(_, b)| b.val).expect("set above");
        state.iterations.push(IterationRecord {
            k,
            lower_bound: lower,
            upper_bound: upper,
            best_upper_bound: best_upper,
            lambda_count: state.lambda_set.len(),
            witness_count: state.witness_pool.len(),
            seconds: start.elapsed().as_secs_f64(),
        });
        if best_upper - lower <= options.epsilon * (1.0 + best_upper.abs()) {
            return Ok(best.expect("set above"));
        }
        let mut progress = false;
        for l in new_lambdas {
            progress |= insert_lambda(&mut state.lambda_set, l);
        }
        if graph.is_none() {
            for y in new_witnesses {
                if !state.witness_pool.contains(&y) {
                    state.witness_pool.push(y);
                    progress = true;
                }
            }
        }
        if !progress {
            return Err(Error::Stall(format!(
                "iteration {k} added nothing while UB − LB = {}",
                best_upper - lower
            )));
        }
    }
    Err(Error::Stall(format!("no convergence within {} iterations", options.max_iterations)))
}

/// Min-max regret solution for the single size `lambda`.
///
/// The dual formulation solves one compact model. The general formulation
/// alternates master solves with exact regret evaluation, adding the regret
/// solution of each candidate, until the bound meets the regret within `ε`.
pub fn solve_minmax_regret_fixed(
    instance: &Instance,
    lambda: f64,
    backend: &dyn SolverBackend,
    formulation: Formulation,
    epsilon: f64,
) -> Result<(BinarySolution, f64)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("uncertainty size λ={lambda} outside [0, 1]")));
    }
    let segment = vec![Segment {
        lo: lambda,
        hi: lambda,
        weight: 1.0,
        point: lambda,
    }];
    match formulation {
        Formulation::DualSp => {
            let graph = instance
                .as_graph()
                .ok_or_else(|| Error::Usage("the dual formulation needs a shortest path instance".into()))?;
            let model = dual_sp_model(graph, segment)?;
            let (x, _) = solve_master(&model, instance, backend)?;
            let (regret, _) = regret_at(instance, &x, lambda)?;
            Ok((x, regret))
        }
        Formulation::General => {
            let (nominal, _) = instance.solve_nominal(instance.nominal().values())?;
            let (nominal_regret, y) = regret_at(instance, &nominal, lambda)?;
            let mut best = (nominal, nominal_regret);
            let mut pool = vec![y];
            loop {
                let model = general_model(instance, segment.clone(), &pool)?;
                let (x, lower) = solve_master(&model, instance, backend)?;
                let (regret, y) = regret_at(instance, &x, lambda)?;
                if regret < best.1 {
                    best = (x, regret);
                }
                if best.1 - lower <= epsilon * (1.0 + best.1.abs()) {
                    return Ok(best);
                }
                if pool.contains(&y) {
                    return Err(Error::Stall(format!(
                        "fixed-size cut loop repeated a regret solution with gap {}",
                        best.1 - lower
                    )));
                }
                pool.push(y);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::backend::EnumerationBackend;
    use crate::model::NominalCosts;
    use crate::problems::{Arc, GraphInstance, SelectionInstance};
    use crate::regret::tests::parallel_edges;

    #[test]
    fn parallel_edges_both_formulations() {
        let g = parallel_edges();
        for f in [Formulation::General, Formulation::DualSp] {
            let r = algorithm1(&g, &WeightFunction::uniform(), &EnumerationBackend::default(), &Algorithm1Options::new(f))
                .unwrap();
            assert_eq!(r.x.ones(), vec![0]);
            assert!((r.val - 32.0 / 9.0).abs() < 1e-12);
            let last = r.state.iterations.last().unwrap();
            assert!(last.best_upper_bound - last.lower_bound <= 1e-6 * (1.0 + last.best_upper_bound));
            r.state.check_bounds(1e-9).unwrap();
        }
    }

    #[test]
    fn single_path_needs_one_iteration() {
        let g: Instance =
            GraphInstance::shortest_path(2, vec![Arc::new(0, 1)], NominalCosts::new(vec![3.0]).unwrap(), 0, 1)
                .unwrap()
                .into();
        let r = algorithm1(&g, &WeightFunction::uniform(), &EnumerationBackend::default(), &Algorithm1Options::for_instance(&g))
            .unwrap();
        assert_eq!((r.val, r.state.iterations.len()), (0.0, 1));
    }

    #[test]
    fn selection_master_is_exact() {
        let costs: Vec<f64> = (0..10).map(|i| ((i * 7) % 10 + 1) as f64).collect();
        let s: Instance = SelectionInstance::new(3, NominalCosts::new(costs).unwrap()).unwrap().into();
        let r = algorithm1(&s, &WeightFunction::uniform(), &EnumerationBackend::default(), &Algorithm1Options::new(Formulation::General))
            .unwrap();
        let best = s
            .enumerate_solutions(200)
            .unwrap()
            .iter()
            .map(|x| crate::regret::compute_val(&s, x, &WeightFunction::uniform()).unwrap().val)
            .fold(f64::INFINITY, f64::min);
        assert!((r.val - best).abs() < 1e-9);
    }

    #[test]
    fn dual_formulation_needs_a_graph() {
        let s: Instance = SelectionInstance::new(1, NominalCosts::new(vec![1.0, 2.0]).unwrap()).unwrap().into();
        let err = algorithm1(&s, &WeightFunction::uniform(), &EnumerationBackend::default(), &Algorithm1Options::new(Formulation::DualSp))
            .unwrap_err();
        assert!(matches!(err.error, Error::Usage(_)));
    }

    #[test]
    fn failures_keep_partial_state() {
        let g = parallel_edges();
        let backend = EnumerationBackend { limit: 1 };
        let err = algorithm1(&g, &WeightFunction::uniform(), &backend, &Algorithm1Options::new(Formulation::DualSp))
            .unwrap_err();
        assert!(matches!(err.error, Error::Capacity { .. }));
        assert_eq!(err.state.lambda_set, vec![0.5]);
    }

    #[test]
    fn fixed_size_baselines() {
        let g = parallel_edges();
        for f in [Formulation::General, Formulation::DualSp] {
            let (x, r) = solve_minmax_regret_fixed(&g, 1.0, &EnumerationBackend::default(), f, 1e-9).unwrap();
            assert_eq!((x.ones(), r), (vec![0], 8.0));
            let (x, r) = solve_minmax_regret_fixed(&g, 0.0, &EnumerationBackend::default(), f, 1e-9).unwrap();
            assert_eq!((x.ones(), r), (vec![0], 0.0));
        }
    }
}
