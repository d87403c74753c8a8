use std::path::{Path, PathBuf};
use std::process::Command;

use crate::error::{Error, Result};
use crate::master::formulation::complete_assignment;
use crate::master::lp::write_lp;
use crate::master::model::{MilpModel, VarKind};
use crate::problems::{CombinatorialProblem, DEFAULT_ENUMERATION_LIMIT};

/// Feasibility tolerance every backend answer is checked against.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-6;

/// Most binary variables the structure-free enumeration accepts.
pub const MAX_PATTERN_BINARIES: usize = 25;

pub const SOLVER_CMD_ENV: &str = "VSR_SOLVER_CMD";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackendSolution {
    pub status: SolveStatus,
    pub objective: f64,
    /// One value per model variable; empty unless optimal.
    pub values: Vec<f64>,
}

impl BackendSolution {
    pub fn infeasible() -> Self {
        BackendSolution {
            status: SolveStatus::Infeasible,
            objective: f64::NAN,
            values: Vec::new(),
        }
    }

    fn optimal(model: &MilpModel, values: Vec<f64>) -> Self {
        BackendSolution {
            status: SolveStatus::Optimal,
            objective: model.objective_value(&values),
            values,
        }
    }
}

/// A MILP solver.
pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &str;

    fn supports_continuous(&self) -> bool {
        true
    }

    /// Solves `model` to optimality. An optimal answer satisfies every row and
    /// bound within [`FEASIBILITY_TOLERANCE`].
    fn solve(&self, model: &MilpModel) -> Result<BackendSolution>;
}

/// Exact solver by enumeration, for desk-scale models.
///
/// Models built from a problem instance are solved by enumerating the feasible
/// solutions of the instance and completing each one optimally (epigraph
/// variables take the largest cut, node potentials the shortest path distances).
/// Other models must be pure binary with at most 25 variables; all patterns are
/// tried. Ties go to the first solution found.
#[derive(Debug, Clone)]
pub struct EnumerationBackend {
    pub limit: usize,
}

impl Default for EnumerationBackend {
    fn default() -> Self {
        EnumerationBackend {
            limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

impl SolverBackend for EnumerationBackend {
    fn name(&self) -> &str {
        "enumeration"
    }

    fn solve(&self, model: &MilpModel) -> Result<BackendSolution> {
        match &model.meta {
            Some(meta) => {
                let instance = match &meta.structure {
                    crate::master::model::ModelStructure::General { instance, .. } => instance.clone(),
                    crate::master::model::ModelStructure::DualSp { graph } => graph.clone().into(),
                };
                let mut best: Option<(f64, Vec<f64>)> = None;
                for x in instance.enumerate_solutions(self.limit)? {
                    let (values, objective) = complete_assignment(model, &x)?;
                    if best.as_ref().is_none_or(|(b, _)| objective < *b) {
                        best = Some((objective, values));
                    }
                }
                Ok(best.map_or_else(BackendSolution::infeasible, |(_, v)| BackendSolution::optimal(model, v)))
            }
            None => solve_patterns(model),
        }
    }
}

fn solve_patterns(model: &MilpModel) -> Result<BackendSolution> {
    if !model.is_pure_binary() {
        return Err(Error::Usage(
            "enumeration of models with continuous variables needs problem structure".into(),
        ));
    }
    let n = model.variables.len();
    if n > MAX_PATTERN_BINARIES {
        return Err(Error::Capacity {
            what: format!("2^{n} binary patterns"),
            limit: 1 << MAX_PATTERN_BINARIES,
        });
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut values = vec![0.0; n];
    for mask in 0u64..(1u64 << n) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = ((mask >> i) & 1) as f64;
        }
        if model.violation(&values, 1e-9).is_some() {
            continue;
        }
        let obj = model.objective_value(&values);
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, values.clone()));
        }
    }
    Ok(best.map_or_else(BackendSolution::infeasible, |(_, v)| BackendSolution::optimal(model, v)))
}

/// Runs an external solver on an LP file.
///
/// The command template is run through `sh -c` after substituting `{model}` and
/// `{solution}` with the paths of the written model and of the solution file the
/// solver should produce. Without a `{solution}` placeholder the solution is
/// read from standard output.
#[derive(Debug, Clone)]
pub struct ExternalBackend {
    pub command: String,
    /// Copy of every model and solution written, for debugging.
    pub keep_dir: Option<PathBuf>,
}

impl ExternalBackend {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalBackend {
            command: command.into(),
            keep_dir: None,
        }
    }

    /// Reads the command template from `VSR_SOLVER_CMD`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(SOLVER_CMD_ENV) {
            Ok(cmd) if !cmd.trim().is_empty() => Ok(ExternalBackend::new(cmd)),
            _ => Err(Error::Usage(format!(
                "no external solver configured; set {SOLVER_CMD_ENV} to a command using {{model}} and {{solution}}"
            ))),
        }
    }
}

fn quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', r"'\''"))
}

impl SolverBackend for ExternalBackend {
    fn name(&self) -> &str {
        "external"
    }

    fn solve(&self, model: &MilpModel) -> Result<BackendSolution> {
        let dir = tempfile::tempdir().map_err(|e| Error::io(std::env::temp_dir(), e))?;
        let model_path = dir.path().join("model.lp");
        let solution_path = dir.path().join("model.sol");
        std::fs::write(&model_path, write_lp(model)).map_err(|e| Error::io(&model_path, e))?;
        let command = self
            .command
            .replace("{model}", &quote(&model_path))
            .replace("{solution}", &quote(&solution_path));
        let output = Command::new("sh")
            .arg("-c")
            .arg(&command)
            .output()
            .map_err(|e| Error::io("sh", e))?;
        let captured = format!(
            "{}{}",
            String::from_utf8_lossy(&output.stdout),
            String::from_utf8_lossy(&output.stderr)
        );
        if !output.status.success() {
            return Err(Error::Backend {
                message: format!("solver command `{command}` failed with {}", output.status),
                output: captured,
            });
        }
        let text = if self.command.contains("{solution}") {
            std::fs::read_to_string(&solution_path).map_err(|e| Error::Backend {
                message: format!("solver wrote no solution file: {e}"),
                output: captured.clone(),
            })?
        } else {
            String::from_utf8_lossy(&output.stdout).into_owned()
        };
        if let Some(keep) = &self.keep_dir {
            std::fs::create_dir_all(keep).map_err(|e| Error::io(keep, e))?;
            let stamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_nanos());
            let _ = std::fs::copy(&model_path, keep.join(format!("{stamp}.lp")));
            let _ = std::fs::write(keep.join(format!("{stamp}.sol")), &text);
        }
        parse_solution(model, &text).map_err(|e| match e {
            Error::Backend { message, .. } => Error::Backend {
                message,
                output: captured,
            },
            other => other,
        })
    }
}

/// Parses a solver solution file for `model`.
///
/// Understands the HiGHS format (`Model status` followed by the status line, then
/// `# Columns N` and `name value` lines). Any other text is scanned for
/// `name value` pairs naming model variables, with an `infeasible` mention
/// reporting infeasibility.
pub fn parse_solution(model: &MilpModel, text: &str) -> Result<BackendSolution> {
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    let status_line = lines
        .iter()
        .position(|l| l.eq_ignore_ascii_case("model status"))
        .and_then(|i| lines[i + 1..].iter().find(|l| !l.is_empty()))
        .map(|s| s.to_ascii_lowercase());
    let infeasible = match &status_line {
        Some(s) => s.contains("infeasible"),
        None => text.to_ascii_lowercase().contains("infeasible"),
    };
    if infeasible {
        return Ok(BackendSolution::infeasible());
    }
    if let Some(s) = &status_line {
        if s != "optimal" {
            return Err(Error::backend(format!("solver finished with status \"{s}\"")));
        }
    }

    let index: std::collections::HashMap<&str, usize> = model
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.as_str(), i))
        .collect();
    // Restrict to the column block when the file has one, so row activities
    // with clashing names are not mistaken for values.
    let body: &[&str] = match lines.iter().position(|l| l.starts_with("# Columns")) {
        Some(start) => {
            let count: usize = lines[start]["# Columns".len()..].trim().parse().unwrap_or(0);
            &lines[start + 1..(start + 1 + count).min(lines.len())]
        }
        None => &lines,
    };
    let mut values = vec![f64::NAN; model.variables.len()];
    for line in body {
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value)) = (parts.next(), parts.next()) else {
            continue;
        };
        if let (Some(&i), Ok(v)) = (index.get(name), value.parse::<f64>()) {
            values[i] = v;
        }
    }
    for (i, v) in values.iter_mut().enumerate() {
        let var = &model.variables[i];
        if v.is_nan() {
            // Some solvers omit zero-valued columns.
            if var.lower <= 0.0 && var.upper >= 0.0 {
                *v = 0.0;
            } else {
                return Err(Error::backend(format!("solution has no value for {}", var.name)));
            }
        }
        if var.kind == VarKind::Binary {
            *v = v.round();
        }
    }
    if let Some(problem) = model.violation(&values, FEASIBILITY_TOLERANCE) {
        return Err(Error::backend(format!("solver answer is infeasible: {problem}")));
    }
    Ok(BackendSolution::optimal(model, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::model::ConstraintSense;

    fn one_binary() -> MilpModel {
        let mut m = MilpModel::new();
        let x = m.add_binary("x_0");
        m.objective.push((x, 1.0));
        m
    }

    #[test]
    fn pattern_enumeration() {
        let s = EnumerationBackend::default().solve(&one_binary()).unwrap();
        assert_eq!((s.status, s.objective, s.values.clone()), (SolveStatus::Optimal, 0.0, vec![0.0]));
        let mut m = MilpModel::new();
        let a = m.add_binary("x_0");
        let b = m.add_binary("x_1");
        m.add_constraint("one", vec![(a, 1.0), (b, 1.0)], ConstraintSense::Eq, 1.0);
        m.add_constraint("none", vec![(a, 1.0), (b, 1.0)], ConstraintSense::Eq, 0.0);
        assert_eq!(EnumerationBackend::default().solve(&m).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn pattern_enumeration_refuses_large_or_mixed_models() {
        let mut m = MilpModel::new();
        for i in 0..26 {
            m.add_binary(format!("x_{i}"));
        }
        assert!(matches!(EnumerationBackend::default().solve(&m), Err(Error::Capacity { .. })));
        let mut m = one_binary();
        m.add_var("z_0", VarKind::Continuous, 0.0, 1.0);
        assert!(matches!(EnumerationBackend::default().solve(&m), Err(Error::Usage(_))));
    }

    #[test]
    fn parses_highs_solution() {
        let mut m = one_binary();
        m.add_var("z_0", VarKind::Continuous, 0.0, f64::INFINITY);
        m.objective.push((1, 2.0));
        let text = "Model status\nOptimal\n\n# Primal solution values\nFeasible\nObjective 7\n# Columns 2\nx_0 1\nz_0 3\n# Rows 0\n";
        let s = parse_solution(&m, text).unwrap();
        assert_eq!(s.values, vec![1.0, 3.0]);
        assert_eq!(s.objective, 7.0);
        let s = parse_solution(&m, "Model status\nInfeasible\n").unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);
        assert!(matches!(parse_solution(&m, "Model status\nTime limit reached\n"), Err(Error::Backend { .. })));
    }

    #[test]
    fn parses_generic_pairs_and_checks_feasibility() {
        let mut m = one_binary();
        let y = m.add_binary("x_1");
        m.add_constraint("one", vec![(0, 1.0), (y, 1.0)], ConstraintSense::Eq, 1.0);
        let s = parse_solution(&m, "x_1 1.0000000001\n").unwrap();
        assert_eq!(s.values, vec![0.0, 1.0]);
        assert!(matches!(parse_solution(&m, "x_0 0\nx_1 0\n"), Err(Error::Backend { .. })));
    }

    #[test]
    fn external_command_round_trip() {
        // A stand-in solver that ignores the model and reports x_0 = 0.
        let b = ExternalBackend::new("printf 'Model status\\nOptimal\\n# Columns 1\\nx_0 0\\n' > {solution}; test -s {model}");
        let s = b.solve(&one_binary()).unwrap();
        assert_eq!((s.status, s.objective), (SolveStatus::Optimal, 0.0));
        let b = ExternalBackend::new("printf 'x_0 0\\n'");
        assert_eq!(b.solve(&one_binary()).unwrap().values, vec![0.0]);
    }

    #[test]
    fn external_failures_carry_output() {
        let b = ExternalBackend::new("echo broken solver; exit 3");
        match b.solve(&one_binary()) {
            Err(Error::Backend { output, .. }) => assert!(output.contains("broken solver")),
            other => panic!("{other:?}"),
        }
        let b = ExternalBackend::new("true {solution}");
        assert!(matches!(b.solve(&one_binary()), Err(Error::Backend { .. })));
    }
}
