use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::master::model::{
    ConstraintSense, FeasibilityVars, MilpModel, ModelMeta, ModelStructure, VarKind,
};
use crate::model::{BinarySolution, WeightFunction, EPS_LAMBDA};
use crate::problems::{distances_from, CombinatorialProblem, GraphInstance, GraphKind, Instance};

/// A piece `[lo, hi]` of the size range with its weight mass and the size at
/// which the master evaluates regret on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    /// `∫ w` over the segment.
    pub weight: f64,
    /// Weighted centroid `∫λw / ∫w`; the midpoint when `w` vanishes on the segment.
    pub point: f64,
}

/// Splits `Λ` at the sorted points of `lambda_set`.
///
/// Segments run from `Λ.lo` to the first point, between consecutive points, and
/// from the last point to `Λ.hi`; zero-width pieces are dropped. Evaluating an
/// affine piece at the weighted centroid reproduces its exact integral, and for a
/// convex profile it never overestimates it.
pub fn build_segments(lambda_set: &[f64], w: &WeightFunction) -> Result<Vec<Segment>> {
    if lambda_set.is_empty() {
        return Err(Error::Usage("changepoint set Λ̄ is empty".into()));
    }
    let range = w.range();
    if let Some(l) = lambda_set.iter().find(|l| !range.contains(**l)) {
        return Err(Error::Domain(format!(
            "changepoint {l} outside [{}, {}]",
            range.lo(),
            range.hi()
        )));
    }
    if lambda_set.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::Usage("changepoint set Λ̄ must be sorted".into()));
    }
    if range.is_degenerate() {
        return Ok(vec![Segment {
            lo: range.lo(),
            hi: range.hi(),
            weight: 0.0,
            point: range.lo(),
        }]);
    }
    let mut cuts = vec![range.lo()];
    for &l in lambda_set.iter().chain([range.hi()].iter()) {
        let l = l.clamp(range.lo(), range.hi());
        if l - cuts[cuts.len() - 1] > EPS_LAMBDA {
            cuts.push(l);
        } else if l == range.hi() {
            // Snap the final boundary onto Λ.hi.
            let last = cuts.len() - 1;
            if last > 0 {
                cuts[last] = l;
            } else {
                cuts.push(l);
            }
        }
    }
    cuts.windows(2)
        .map(|p| {
            let (lo, hi) = (p[0], p[1]);
            let (m0, m1) = w.moments(lo, hi)?;
            let point = if m0 > 0.0 {
                (m1 / m0).clamp(lo, hi)
            } else {
                0.5 * (lo + hi)
            };
            Ok(Segment { lo, hi, weight: m0, point })
        })
        .collect()
}

/// Regret cut of witness `y` at size `lambda`: `z ≥ Σᵢ coefᵢ·xᵢ + constant`.
pub(crate) fn regret_cut(nominal: &[f64], y: &BinarySolution, lambda: f64) -> (Vec<f64>, f64) {
    let coef = nominal
        .iter()
        .enumerate()
        .map(|(i, &c)| if y.get(i) { (1.0 - lambda) * c } else { (1.0 + lambda) * c })
        .collect();
    (coef, -(1.0 - lambda) * y.dot(nominal))
}

fn add_x_vars(model: &mut MilpModel, n: usize) -> Vec<usize> {
    (0..n).map(|i| model.add_binary(format!("x_{i}"))).collect()
}

/// Adds rows restricting `x` to the feasible set of `instance`.
fn add_feasibility(model: &mut MilpModel, instance: &Instance, x: &[usize]) -> FeasibilityVars {
    match instance {
        Instance::Selection(s) => {
            let terms = x.iter().map(|&v| (v, 1.0)).collect();
            model.add_constraint("card", terms, ConstraintSense::Eq, s.p() as f64);
            FeasibilityVars::None
        }
        Instance::Graph(g) => match g.kind() {
            GraphKind::ShortestPath { source, target, directed } => {
                let (flow_vars, orientation) = if directed {
                    (x.iter().map(|&v| [v, usize::MAX]).collect::<Vec<_>>(), None)
                } else {
                    let dirs: Vec<[usize; 2]> = (0..g.arcs().len())
                        .map(|e| [model.add_binary(format!("d_{e}_0")), model.add_binary(format!("d_{e}_1"))])
                        .collect();
                    for (e, d) in dirs.iter().enumerate() {
                        model.add_constraint(
                            format!("link_{e}"),
                            vec![(x[e], 1.0), (d[0], -1.0), (d[1], -1.0)],
                            ConstraintSense::Eq,
                            0.0,
                        );
                    }
                    (dirs.clone(), Some(dirs))
                };
                let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); g.node_count()];
                for (e, arc) in g.arcs().iter().enumerate() {
                    let [fwd, bwd] = flow_vars[e];
                    rows[arc.tail].push((fwd, 1.0));
                    rows[arc.head].push((fwd, -1.0));
                    if bwd != usize::MAX {
                        rows[arc.head].push((bwd, 1.0));
                        rows[arc.tail].push((bwd, -1.0));
                    }
                }
                for (v, terms) in rows.into_iter().enumerate() {
                    let rhs = if v == source {
                        1.0
                    } else if v == target {
                        -1.0
                    } else {
                        0.0
                    };
                    if terms.is_empty() && rhs == 0.0 {
                        continue;
                    }
                    model.add_constraint(format!("flow_{v}"), terms, ConstraintSense::Eq, rhs);
                }
                orientation.map_or(FeasibilityVars::None, FeasibilityVars::Orientation)
            }
            GraphKind::SpanningTree => {
                // Node 0 ships one unit to every other node along selected edges.
                let n = g.node_count();
                let cap = (n - 1) as f64;
                let terms = x.iter().map(|&v| (v, 1.0)).collect();
                model.add_constraint("card", terms, ConstraintSense::Eq, cap);
                let flows: Vec<[usize; 2]> = (0..g.arcs().len())
                    .map(|e| {
                        [
                            model.add_var(format!("f_{e}_0"), VarKind::Continuous, 0.0, cap),
                            model.add_var(format!("f_{e}_1"), VarKind::Continuous, 0.0, cap),
                        ]
                    })
                    .collect();
                let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
                for (e, arc) in g.arcs().iter().enumerate() {
                    let [fwd, bwd] = flows[e];
                    rows[arc.head].push((fwd, 1.0));
                    rows[arc.tail].push((fwd, -1.0));
                    rows[arc.tail].push((bwd, 1.0));
                    rows[arc.head].push((bwd, -1.0));
                    for (d, f) in [fwd, bwd].into_iter().enumerate() {
                        model.add_constraint(
                            format!("tree_cap_{e}_{d}"),
                            vec![(f, 1.0), (x[e], -cap)],
                            ConstraintSense::Le,
                            0.0,
                        );
                    }
                }
                for (v, terms) in rows.into_iter().enumerate().skip(1) {
                    model.add_constraint(format!("tree_flow_{v}"), terms, ConstraintSense::Eq, 1.0);
                }
                FeasibilityVars::TreeFlow(flows)
            }
        },
    }
}

/// Formulation with one epigraph variable per segment and one regret cut per
/// segment and pooled solution.
pub fn build_formulation_general(
    instance: &Instance,
    lambda_set: &[f64],
    witnesses: &[BinarySolution],
    w: &WeightFunction,
) -> Result<MilpModel> {
    let segments = build_segments(lambda_set, w)?;
    general_model(instance, segments, witnesses)
}

pub(crate) fn general_model(
    instance: &Instance,
    segments: Vec<Segment>,
    witnesses: &[BinarySolution],
) -> Result<MilpModel> {
    if witnesses.is_empty() {
        return Err(Error::Usage("witness pool 𝒴 is empty".into()));
    }
    for y in witnesses {
        instance.require_feasible(y)?;
    }
    let nominal = instance.nominal().values();
    let mut model = MilpModel::new();
    let x = add_x_vars(&mut model, instance.dimension());
    let feasibility = add_feasibility(&mut model, instance, &x);
    let mut z_vars = Vec::with_capacity(segments.len());
    for (j, seg) in segments.iter().enumerate() {
        let z = model.add_var(format!("z_{j}"), VarKind::Continuous, 0.0, f64::INFINITY);
        z_vars.push(z);
        if seg.weight != 0.0 {
            model.objective.push((z, seg.weight));
        }
        for (l, y) in witnesses.iter().enumerate() {
            let (coef, constant) = regret_cut(nominal, y, seg.point);
            let mut terms = vec![(z, 1.0)];
            terms.extend(coef.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, &c)| (x[i], -c)));
            model.add_constraint(format!("cut_{j}_{l}"), terms, ConstraintSense::Ge, constant);
        }
    }
    model.meta = Some(ModelMeta {
        structure: ModelStructure::General {
            instance: instance.clone(),
            witnesses: witnesses.to_vec(),
        },
        segments,
        x_vars: x,
        z_vars,
        potential_vars: Vec::new(),
        feasibility,
    });
    Ok(model)
}

/// Compact shortest path formulation: per segment, the inner shortest path is
/// replaced by node potentials bounded by the arc costs `c(x, λ̄ⱼ)`.
pub fn build_formulation_dual_sp(
    graph: &GraphInstance,
    lambda_set: &[f64],
    w: &WeightFunction,
) -> Result<MilpModel> {
    let segments = build_segments(lambda_set, w)?;
    dual_sp_model(graph, segments)
}

pub(crate) fn dual_sp_model(graph: &GraphInstance, segments: Vec<Segment>) -> Result<MilpModel> {
    let GraphKind::ShortestPath { source, target, directed: true } = graph.kind() else {
        return Err(Error::Usage(
            "the dual formulation needs a directed shortest path instance; use the general formulation".into(),
        ));
    };
    let nominal = graph.nominal().values();
    let instance = Instance::Graph(graph.clone());
    let mut model = MilpModel::new();
    let x = add_x_vars(&mut model, graph.dimension());
    let feasibility = add_feasibility(&mut model, &instance, &x);
    let mut x_cost = vec![0.0; x.len()];
    let mut potential_vars = Vec::with_capacity(segments.len());
    for (j, seg) in segments.iter().enumerate() {
        let lambda = seg.point;
        let u: Vec<usize> = (0..graph.node_count())
            .map(|v| {
                let (lo, hi) = if v == source { (0.0, 0.0) } else { (f64::NEG_INFINITY, f64::INFINITY) };
                model.add_var(format!("u_{j}_{v}"), VarKind::Continuous, lo, hi)
            })
            .collect();
        for (e, arc) in graph.arcs().iter().enumerate() {
            let c = nominal[e];
            let mut terms = vec![(u[arc.head], 1.0), (u[arc.tail], -1.0)];
            if c != 0.0 {
                terms.push((x[e], -2.0 * lambda * c));
            }
            model.add_constraint(format!("dual_{j}_{e}"), terms, ConstraintSense::Le, (1.0 - lambda) * c);
        }
        for (e, xc) in x_cost.iter_mut().enumerate() {
            *xc += seg.weight * (1.0 + lambda) * nominal[e];
        }
        if seg.weight != 0.0 {
            model.objective.push((u[target], -seg.weight));
        }
        potential_vars.push(u);
    }
    let mut objective: Vec<(usize, f64)> =
        x.iter().zip(&x_cost).filter(|(_, c)| **c != 0.0).map(|(&v, &c)| (v, c)).collect();
    objective.append(&mut model.objective);
    model.objective = objective;
    model.meta = Some(ModelMeta {
        structure: ModelStructure::DualSp { graph: graph.clone() },
        segments,
        x_vars: x,
        z_vars: Vec::new(),
        potential_vars,
        feasibility,
    });
    Ok(model)
}

/// Best completion of a feasible `x` to all model variables, and its objective.
pub(crate) fn complete_assignment(model: &MilpModel, x: &BinarySolution) -> Result<(Vec<f64>, f64)> {
    let meta = model
        .meta
        .as_ref()
        .ok_or_else(|| Error::Usage("model carries no problem structure".into()))?;
    let mut values = vec![0.0; model.variables.len()];
    for (i, &v) in meta.x_vars.iter().enumerate() {
        values[v] = if x.get(i) { 1.0 } else { 0.0 };
    }
    match &meta.structure {
        ModelStructure::General { instance, witnesses } => {
            let nominal = instance.nominal().values();
            for (seg, &z) in meta.segments.iter().zip(&meta.z_vars) {
                values[z] = witnesses
                    .iter()
                    .map(|y| {
                        let (coef, constant) = regret_cut(nominal, y, seg.point);
                        x.dot(&coef) + constant
                    })
                    .fold(0.0, f64::max);
            }
            complete_feasibility(&meta.feasibility, instance, x, &mut values);
        }
        ModelStructure::DualSp { graph } => {
            let nominal = graph.nominal().values();
            let source = graph.terminals().expect("shortest path instance").0;
            for (seg, u) in meta.segments.iter().zip(&meta.potential_vars) {
                let lambda = seg.point;
                let dist = distances_from(graph, source, |e| {
                    if x.get(e) {
                        (1.0 + lambda) * nominal[e]
                    } else {
                        (1.0 - lambda) * nominal[e]
                    }
                });
                // Nodes the source cannot reach get the largest finite potential,
                // which keeps every arc row satisfied.
                let top = dist.iter().flatten().fold(0.0, |a: f64, &b| a.max(b));
                for (v, &var) in u.iter().enumerate() {
                    values[var] = dist[v].unwrap_or(top);
                }
            }
        }
    }
    let objective = model.objective_value(&values);
    Ok((values, objective))
}

fn complete_feasibility(feas: &FeasibilityVars, instance: &Instance, x: &BinarySolution, values: &mut [f64]) {
    let Instance::Graph(g) = instance else {
        return;
    };
    match feas {
        FeasibilityVars::None => {}
        FeasibilityVars::Orientation(dirs) => {
            let (source, target) = g.terminals().expect("shortest path instance");
            let mut v = source;
            let mut used = vec![false; g.arcs().len()];
            while v != target {
                let Some(&(e, next)) = g.neighbours(v).iter().find(|(e, _)| x.get(*e) && !used[*e]) else {
                    break;
                };
                used[e] = true;
                let d = if g.arcs()[e].tail == v { 0 } else { 1 };
                values[dirs[e][d]] = 1.0;
                v = next;
            }
        }
        FeasibilityVars::TreeFlow(flows) => {
            let n = g.node_count();
            let mut parent_arc = vec![usize::MAX; n];
            let mut order = Vec::with_capacity(n);
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &(e, u) in g.neighbours(v) {
                    if x.get(e) && !seen[u] {
                        seen[u] = true;
                        parent_arc[u] = e;
                        queue.push_back(u);
                    }
                }
            }
            let mut size = vec![1.0; n];
            for &v in order.iter().rev() {
                let e = parent_arc[v];
                if e == usize::MAX {
                    continue;
                }
                let p = g.arcs()[e].other(v);
                size[p] += size[v];
                let d = if g.arcs()[e].head == v { 0 } else { 1 };
                values[flows[e][d]] = size[v];
            }
        }
    }
}

/// Turns a flow-feasible selection of a shortest path model into a simple path
/// by dropping cycles; never increases the master objective.
pub(crate) fn repair_solution(instance: &Instance, x: BinarySolution) -> BinarySolution {
    let Instance::Graph(g) = instance else {
        return x;
    };
    let Some((source, target)) = g.terminals() else {
        return x;
    };
    if g.is_feasible(&x) {
        return x;
    }
    let mut pred = vec![usize::MAX; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::from([source]);
    seen[source] = true;
    while let Some(v) = queue.pop_front() {
        for &(e, u) in g.neighbours(v) {
            if x.get(e) && !seen[u] {
                seen[u] = true;
                pred[u] = e;
                queue.push_back(u);
            }
        }
    }
    if !seen[target] {
        return x;
    }
    let mut path = BinarySolution::empty(x.len());
    let mut v = target;
    while v != source {
        path.set(pred[v], true);
        v = g.arcs()[pred[v]].other(v);
    }
    path
}
