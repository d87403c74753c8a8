//! Nominal combinatorial problems `min { cᵗx : x ∈ 𝒳 }`: selection, shortest
//! path and spanning tree, with feasibility checks and exhaustive enumeration.

mod graph;
mod paths;
mod selection;

pub use graph::{Arc, GraphInstance, GraphKind};
pub use paths::{distances_from, shortest_path_by, LexCost, PathCost};
pub use selection::SelectionInstance;

use crate::error::{Error, Result};
use crate::model::{BinarySolution, NominalCosts};

/// Default cap on exhaustive enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000_000;

/// A combinatorial problem class with a nominal oracle.
pub trait CombinatorialProblem {
    /// Size `n` of the ground set.
    fn dimension(&self) -> usize;

    fn nominal(&self) -> &NominalCosts;

    /// A minimizer of `cᵗx` over the feasible set and its value.
    ///
    /// Ties are broken deterministically (by element index), so equal inputs give
    /// equal outputs.
    fn solve_nominal(&self, costs: &[f64]) -> Result<(BinarySolution, f64)>;

    fn is_feasible(&self, x: &BinarySolution) -> bool;

    /// Every feasible solution, in a deterministic order; fails with
    /// [`Error::Capacity`] when there are more than `limit`.
    fn enumerate_solutions(&self, limit: usize) -> Result<Vec<BinarySolution>>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Selection(SelectionInstance),
    Graph(GraphInstance),
}

impl Instance {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Instance::Selection(_) => "selection",
            Instance::Graph(g) => match g.kind() {
                GraphKind::ShortestPath { .. } => "shortest_path",
                GraphKind::SpanningTree => "spanning_tree",
            },
        }
    }

    pub fn as_graph(&self) -> Option<&GraphInstance> {
        match self {
            Instance::Graph(g) => Some(g),
            Instance::Selection(_) => None,
        }
    }

    pub fn as_selection(&self) -> Option<&SelectionInstance> {
        match self {
            Instance::Selection(s) => Some(s),
            Instance::Graph(_) => None,
        }
    }

    /// Checks `x` and returns a feasibility error naming what is wrong.
    pub fn require_feasible(&self, x: &BinarySolution) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::Usage(format!(
                "solution has {} entries, instance has {}",
                x.len(),
                self.dimension()
            )));
        }
        if !self.is_feasible(x) {
            return Err(Error::Feasibility(format!(
                "{x} is not a feasible {} solution",
                self.kind_name()
            )));
        }
        Ok(())
    }
}

impl CombinatorialProblem for Instance {
    fn dimension(&self) -> usize {
        match self {
            Instance::Selection(s) => s.dimension(),
            Instance::Graph(g) => g.dimension(),
        }
    }

    fn nominal(&self) -> &NominalCosts {
        match self {
            Instance::Selection(s) => s.nominal(),
            Instance::Graph(g) => g.nominal(),
        }
    }

    fn solve_nominal(&self, costs: &[f64]) -> Result<(BinarySolution, f64)> {
        match self {
            Instance::Selection(s) => s.solve_nominal(costs),
            Instance::Graph(g) => g.solve_nominal(costs),
        }
    }

    fn is_feasible(&self, x: &BinarySolution) -> bool {
        match self {
            Instance::Selection(s) => s.is_feasible(x),
            Instance::Graph(g) => g.is_feasible(x),
        }
    }

    fn enumerate_solutions(&self, limit: usize) -> Result<Vec<BinarySolution>> {
        match self {
            Instance::Selection(s) => s.enumerate_solutions(limit),
            Instance::Graph(g) => g.enumerate_solutions(limit),
        }
    }
}

impl From<SelectionInstance> for Instance {
    fn from(s: SelectionInstance) -> Self {
        Instance::Selection(s)
    }
}

impl From<GraphInstance> for Instance {
    fn from(g: GraphInstance) -> Self {
        Instance::Graph(g)
    }
}

pub(crate) fn check_costs(costs: &[f64], n: usize) -> Result<()> {
    if costs.len() != n {
        return Err(Error::Usage(format!(
            "cost vector has {} entries, instance has {n}",
            costs.len()
        )));
    }
    if let Some(c) = costs.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(Error::Domain(format!("costs must be finite and non-negative, got {c}")));
    }
    Ok(())
}

pub fn solve_nominal(instance: &Instance, costs: &[f64]) -> Result<(BinarySolution, f64)> {
    instance.solve_nominal(costs)
}

pub fn is_feasible(instance: &Instance, x: &BinarySolution) -> bool {
    x.len() == instance.dimension() && instance.is_feasible(x)
}

pub fn enumerate_solutions(instance: &Instance, limit: usize) -> Result<Vec<BinarySolution>> {
    instance.enumerate_solutions(limit)
}
