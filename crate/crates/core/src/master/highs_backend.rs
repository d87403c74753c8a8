use highs::{ColProblem, HighsModelStatus, Sense};

use crate::error::{Error, Result};
use crate::master::backend::{BackendSolution, SolveStatus, SolverBackend, FEASIBILITY_TOLERANCE};
use crate::master::model::{ConstraintSense, MilpModel, VarKind};

/// In-process HiGHS branch-and-cut.
#[derive(Debug, Clone)]
pub struct HighsBackend {
    pub mip_rel_gap: f64,
    pub time_limit: Option<f64>,
}

impl Default for HighsBackend {
    fn default() -> Self {
        HighsBackend {
            mip_rel_gap: 1e-9,
            time_limit: None,
        }
    }
}

impl SolverBackend for HighsBackend {
    fn name(&self) -> &str {
        "highs"
    }

    fn solve(&self, model: &MilpModel) -> Result<BackendSolution> {
        let mut problem = ColProblem::default();
        let rows: Vec<_> = model
            .constraints
            .iter()
            .map(|c| match c.sense {
                ConstraintSense::Le => problem.add_row(..=c.rhs),
                ConstraintSense::Ge => problem.add_row(c.rhs..),
                ConstraintSense::Eq => problem.add_row(c.rhs..=c.rhs),
            })
            .collect();
        let mut columns: Vec<Vec<_>> = vec![Vec::new(); model.variables.len()];
        for (r, c) in model.constraints.iter().enumerate() {
            for &(v, coef) in &c.terms {
                columns[v].push((rows[r], coef));
            }
        }
        let mut cost = vec![0.0; model.variables.len()];
        for &(v, c) in &model.objective {
            cost[v] += c;
        }
        for (v, var) in model.variables.iter().enumerate() {
            problem.add_column_with_integrality(
                cost[v],
                var.lower..=var.upper,
                columns[v].iter().copied(),
                var.kind == VarKind::Binary,
            );
        }
        let mut highs = problem
            .try_optimise(Sense::Minimise)
            .map_err(|s| Error::backend(format!("HiGHS rejected the model: {s:?}")))?;
        highs.set_option("output_flag", false);
        highs.set_option("mip_rel_gap", self.mip_rel_gap);
        highs.set_option("threads", 1);
        if let Some(t) = self.time_limit {
            highs.set_option("time_limit", t);
        }
        let solved = highs
            .try_solve()
            .map_err(|s| Error::backend(format!("HiGHS failed: {s:?}")))?;
        match solved.status() {
            HighsModelStatus::Optimal => {}
            HighsModelStatus::Infeasible => return Ok(BackendSolution::infeasible()),
            other => return Err(Error::backend(format!("HiGHS finished with status {other:?}"))),
        }
        let mut values = solved.get_solution().columns().to_vec();
        for (v, var) in values.iter_mut().zip(&model.variables) {
            if var.kind == VarKind::Binary {
                *v = v.round();
            }
        }
        if let Some(problem) = model.violation(&values, FEASIBILITY_TOLERANCE) {
            return Err(Error::backend(format!("HiGHS answer is infeasible: {problem}")));
        }
        Ok(BackendSolution {
            status: SolveStatus::Optimal,
            objective: model.objective_value(&values),
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::backend::EnumerationBackend;
    use crate::master::formulation::{build_formulation_dual_sp, build_formulation_general};
    use crate::model::{BinarySolution, WeightFunction};
    use crate::problems::{CombinatorialProblem, Instance};
    use crate::regret::tests::parallel_edges;

    #[test]
    fn matches_enumeration_on_small_masters() {
        let g = parallel_edges();
        let Instance::Graph(graph) = &g else { unreachable!() };
        let w = WeightFunction::uniform();
        let ys = g.enumerate_solutions(10).unwrap();
        let models = [
            build_formulation_dual_sp(graph, &[0.5], &w).unwrap(),
            build_formulation_general(&g, &[0.5], &ys, &w).unwrap(),
        ];
        for m in &models {
            let a = HighsBackend::default().solve(m).unwrap();
            let b = EnumerationBackend::default().solve(m).unwrap();
            assert!((a.objective - b.objective).abs() < 1e-9);
            assert_eq!(m.extract_x(&a.values), Some(BinarySolution::from_indices(2, [0])));
        }
    }

    #[test]
    fn reports_infeasibility() {
        let mut m = MilpModel::new();
        let a = m.add_binary("x_0");
        let b = m.add_binary("x_1");
        m.add_constraint("one", vec![(a, 1.0), (b, 1.0)], ConstraintSense::Eq, 1.0);
        m.add_constraint("none", vec![(a, 1.0), (b, 1.0)], ConstraintSense::Eq, 0.0);
        assert_eq!(HighsBackend::default().solve(&m).unwrap().status, SolveStatus::Infeasible);
    }
}
