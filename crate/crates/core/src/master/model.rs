use crate::master::formulation::Segment;
use crate::model::BinarySolution;
use crate::problems::{GraphInstance, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// May be `-∞`.
    pub lower: f64,
    /// May be `+∞`.
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintSense {
    Le,
    Ge,
    Eq,
}

impl ConstraintSense {
    pub fn symbol(self) -> &'static str {
        match self {
            ConstraintSense::Le => "<=",
            ConstraintSense::Ge => ">=",
            ConstraintSense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: ConstraintSense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Whether `values` satisfy the row within `tol·(1 + |rhs|)`.
    pub fn is_satisfied(&self, values: &[f64], tol: f64) -> bool {
        let a = self.activity(values);
        let slack = tol * (1.0 + self.rhs.abs());
        match self.sense {
            ConstraintSense::Le => a <= self.rhs + slack,
            ConstraintSense::Ge => a >= self.rhs - slack,
            ConstraintSense::Eq => (a - self.rhs).abs() <= slack,
        }
    }
}

/// Which master problem a model encodes, with what is needed to solve it
/// combinatorially.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelStructure {
    /// Regret cuts against an explicit pool of solutions.
    General {
        instance: Instance,
        witnesses: Vec<BinarySolution>,
    },
    /// Shortest path inner problems replaced by their LP duals.
    DualSp { graph: GraphInstance },
}

/// Auxiliary variables describing the feasible set.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityVars {
    None,
    /// Per undirected edge, binary orientation variables (tail→head, head→tail).
    Orientation(Vec<[usize; 2]>),
    /// Per tree edge, continuous flow in each direction.
    TreeFlow(Vec<[usize; 2]>),
}

/// Maps model variables back to the problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub structure: ModelStructure,
    pub segments: Vec<Segment>,
    /// Variable index of `xᵢ`.
    pub x_vars: Vec<usize>,
    /// Epigraph variable per segment (General).
    pub z_vars: Vec<usize>,
    /// Node potentials per segment (DualSp).
    pub potential_vars: Vec<Vec<usize>>,
    pub feasibility: FeasibilityVars,
}

/// `min cᵗv` subject to linear rows and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Sparse objective `(variable, coefficient)`; always minimized.
    pub objective: Vec<(usize, f64)>,
    pub meta: Option<ModelMeta>,
}

impl MilpModel {
    pub fn new() -> Self {
        MilpModel {
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
            meta: None,
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, kind: VarKind, lower: f64, upper: f64) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            kind,
            lower,
            upper,
        });
        self.variables.len() - 1
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, f64)>,
        sense: ConstraintSense,
        rhs: f64,
    ) {
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            sense,
            rhs,
        });
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    pub fn binary_count(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary).count()
    }

    pub fn is_pure_binary(&self) -> bool {
        self.variables.iter().all(|v| v.kind == VarKind::Binary)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// First violated bound or row, if any.
    pub fn violation(&self, values: &[f64], tol: f64) -> Option<String> {
        if values.len() != self.variables.len() {
            return Some(format!(
                "{} values for {} variables",
                values.len(),
                self.variables.len()
            ));
        }
        for (v, var) in values.iter().zip(&self.variables) {
            let slack = tol * (1.0 + v.abs());
            if !v.is_finite() || *v < var.lower - slack || *v > var.upper + slack {
                return Some(format!("{} = {v} outside [{}, {}]", var.name, var.lower, var.upper));
            }
            if var.kind == VarKind::Binary && (v - v.round()).abs() > tol {
                return Some(format!("{} = {v} is not integral", var.name));
            }
        }
        self.constraints
            .iter()
            .find(|c| !c.is_satisfied(values, tol))
            .map(|c| format!("row {} violated (activity {})", c.name, c.activity(values)))
    }

    /// The problem solution encoded by `values`, rounding each `xᵢ`.
    pub fn extract_x(&self, values: &[f64]) -> Option<BinarySolution> {
        let meta = self.meta.as_ref()?;
        Some(BinarySolution::new(
            meta.x_vars.iter().map(|&v| values[v] > 0.5).collect(),
        ))
    }
}

impl Default for MilpModel {
    fn default() -> Self {
        MilpModel::new()
    }
}
