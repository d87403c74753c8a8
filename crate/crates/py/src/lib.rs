//! Python module `vsr`.
//!
//! Solutions cross the boundary as `"0110"` bit strings; a list of 0/1 integers
//! or booleans is accepted on input as well.

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use vsr_core::instances::{
    from_json_str, gen_layered, gen_twopath, load_instance, save_instance, to_json_string, CostType,
    InstanceDocument,
};
use vsr_core::master::{
    algorithm1, build_formulation_dual_sp, build_formulation_general, solve_minmax_regret_fixed,
    write_lp, Algorithm1Options, EnumerationBackend, ExternalBackend, Formulation, HighsBackend,
    SolverBackend, DEFAULT_EPSILON,
};
use vsr_core::minmax::compromise_interval_minmax;
use vsr_core::model::{BinarySolution, NominalCosts, WeightFunction};
use vsr_core::problems::{Arc, CombinatorialProblem, GraphInstance, GraphKind, SelectionInstance};
use vsr_core::regret::{compute_val, regret_at};
use vsr_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        Error::Domain(_) | Error::Usage(_) | Error::Feasibility(_) | Error::Parse { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[derive(FromPyObject)]
enum SolutionArg {
    Bits(String),
    Flags(Vec<bool>),
    Ints(Vec<u8>),
}

impl SolutionArg {
    fn into_solution(self) -> PyResult<BinarySolution> {
        match self {
            SolutionArg::Bits(s) => s.parse().map_err(PyValueError::new_err),
            SolutionArg::Flags(v) => Ok(BinarySolution::new(v)),
            SolutionArg::Ints(v) => {
                if v.iter().any(|&b| b > 1) {
                    return Err(PyValueError::new_err("solution entries must be 0 or 1"));
                }
                Ok(BinarySolution::new(v.into_iter().map(|b| b == 1).collect()))
            }
        }
    }
}

fn weight(points: Option<Vec<(f64, f64)>>) -> PyResult<WeightFunction> {
    match points {
        None => Ok(WeightFunction::uniform()),
        Some(p) => WeightFunction::new(p).map_err(py_err),
    }
}

fn backend(name: &str, command: Option<String>) -> PyResult<Box<dyn SolverBackend>> {
    Ok(match name {
        "enum" => Box::new(EnumerationBackend::default()),
        "highs" => Box::new(HighsBackend::default()),
        "external" => match command {
            Some(c) => Box::new(ExternalBackend::new(c)),
            None => Box::new(ExternalBackend::from_env().map_err(py_err)?),
        },
        other => return Err(PyValueError::new_err(format!("unknown backend '{other}'"))),
    })
}

fn formulation(name: Option<&str>, instance: &vsr_core::problems::Instance) -> PyResult<Formulation> {
    match name {
        None | Some("auto") => Ok(Formulation::default_for(instance)),
        Some("general") => Ok(Formulation::General),
        Some("dual_sp") => Ok(Formulation::DualSp),
        Some(other) => Err(PyValueError::new_err(format!("unknown formulation '{other}'"))),
    }
}

fn costs(values: Vec<f64>) -> PyResult<NominalCosts> {
    NominalCosts::new(values).map_err(py_err)
}

fn arcs(pairs: Vec<(usize, usize)>) -> Vec<Arc> {
    pairs.into_iter().map(|(t, h)| Arc::new(t, h)).collect()
}

/// A combinatorial problem with nominal costs.
#[pyclass(name = "Instance", module = "vsr", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    doc: InstanceDocument,
}

impl PyInstance {
    fn wrap(doc: InstanceDocument) -> Self {
        PyInstance { doc }
    }

    fn inner(&self) -> &vsr_core::problems::Instance {
        &self.doc.instance
    }
}

#[pymethods]
impl PyInstance {
    /// Shortest `source`–`target` paths over `arcs` given as `(tail, head)` pairs.
    #[staticmethod]
    #[pyo3(signature = (nodes, arcs, costs, source, target, directed = true))]
    fn shortest_path(
        nodes: usize,
        arcs: Vec<(usize, usize)>,
        costs: Vec<f64>,
        source: usize,
        target: usize,
        directed: bool,
    ) -> PyResult<Self> {
        let kind = GraphKind::ShortestPath {
            source,
            target,
            directed,
        };
        let g = GraphInstance::new(nodes, self::arcs(arcs), self::costs(costs)?, kind).map_err(py_err)?;
        Ok(Self::wrap(InstanceDocument::new(g)))
    }

    #[staticmethod]
    fn spanning_tree(nodes: usize, edges: Vec<(usize, usize)>, costs: Vec<f64>) -> PyResult<Self> {
        let g = GraphInstance::spanning_tree(nodes, arcs(edges), self::costs(costs)?).map_err(py_err)?;
        Ok(Self::wrap(InstanceDocument::new(g)))
    }

    /// Choose exactly `p` of the elements.
    #[staticmethod]
    fn selection(p: usize, costs: Vec<f64>) -> PyResult<Self> {
        let s = SelectionInstance::new(p, self::costs(costs)?).map_err(py_err)?;
        Ok(Self::wrap(InstanceDocument::new(s)))
    }

    /// Layered graph with `layers` layers of `width` nodes; cost type "A" or "B".
    #[staticmethod]
    #[pyo3(signature = (layers, width, seed, costs = "A"))]
    fn layered(layers: usize, width: usize, seed: u64, costs: &str) -> PyResult<Self> {
        let costs = match costs {
            "A" => CostType::A,
            "B" => CostType::B,
            other => return Err(PyValueError::new_err(format!("unknown cost type '{other}'"))),
        };
        Ok(Self::wrap(InstanceDocument::new(gen_layered(layers, width, costs, seed).map_err(py_err)?)))
    }

    #[staticmethod]
    fn two_path(length: usize, density: f64, seed: u64) -> PyResult<Self> {
        Ok(Self::wrap(InstanceDocument::new(gen_twopath(length, density, seed).map_err(py_err)?)))
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self::wrap(load_instance(path).map_err(py_err)?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self::wrap(from_json_str(text, "<string>").map_err(py_err)?))
    }

    fn save(&self, path: &str) -> PyResult<()> {
        save_instance(path, &self.doc).map_err(py_err)
    }

    fn to_json(&self) -> String {
        to_json_string(&self.doc)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner().kind_name()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner().dimension()
    }

    #[getter]
    fn nominal(&self) -> Vec<f64> {
        self.inner().nominal().values().to_vec()
    }

    /// Minimizer of `costs·x` (nominal costs by default) and its value.
    #[pyo3(signature = (costs = None))]
    fn solve_nominal(&self, costs: Option<Vec<f64>>) -> PyResult<(String, f64)> {
        let c = costs.unwrap_or_else(|| self.nominal());
        let (x, v) = self.inner().solve_nominal(&c).map_err(py_err)?;
        Ok((x.to_string(), v))
    }

    fn is_feasible(&self, x: SolutionArg) -> PyResult<bool> {
        Ok(self.inner().is_feasible(&x.into_solution()?))
    }

    fn __repr__(&self) -> String {
        format!("Instance(kind={:?}, dimension={})", self.kind(), self.dimension())
    }
}

/// Worst-case regret of `x` at size `lam` and the regret solution realizing it.
#[pyfunction]
fn regret(instance: &PyInstance, x: SolutionArg, lam: f64) -> PyResult<(f64, String)> {
    let (r, y) = regret_at(instance.inner(), &x.into_solution()?, lam).map_err(py_err)?;
    Ok((r, y.to_string()))
}

/// Exact weighted regret integral of `x` with its changepoints and regret solutions.
#[pyfunction]
#[pyo3(signature = (instance, x, weight = None))]
fn evaluate<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    x: SolutionArg,
    weight: Option<Vec<(f64, f64)>>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = compute_val(instance.inner(), &x.into_solution()?, &self::weight(weight)?).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("val", r.val)?;
    out.set_item("changepoints", r.changepoints.clone())?;
    out.set_item("witnesses", r.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>())?;
    out.set_item("segment_starts", r.segment_starts())?;
    out.set_item("oracle_calls", r.oracle_calls)?;
    Ok(out)
}

/// Compromise solution minimizing the weighted regret integral.
#[pyfunction]
#[pyo3(signature = (instance, backend = "highs", epsilon = DEFAULT_EPSILON, weight = None, formulation = None, solver_cmd = None))]
fn compromise<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    backend: &str,
    epsilon: f64,
    weight: Option<Vec<(f64, f64)>>,
    formulation: Option<&str>,
    solver_cmd: Option<String>,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = instance.inner();
    let options = Algorithm1Options {
        epsilon,
        ..Algorithm1Options::new(self::formulation(formulation, inst)?)
    };
    let b = self::backend(backend, solver_cmd)?;
    let w = self::weight(weight)?;
    let result = algorithm1(inst, &w, b.as_ref(), &options).map_err(|f| py_err(f.error))?;
    let out = PyDict::new(py);
    out.set_item("x", result.x.to_string())?;
    out.set_item("val", result.val)?;
    out.set_item("changepoints", result.evaluation.changepoints.clone())?;
    out.set_item("lambda_set", result.state.lambda_set.clone())?;
    let log: Vec<(usize, f64, f64, f64, usize)> = result
        .state
        .iterations
        .iter()
        .map(|it| (it.k, it.lower_bound, it.upper_bound, it.best_upper_bound, it.lambda_count))
        .collect();
    out.set_item("iterations", log)?;
    Ok(out)
}

/// Min-max regret solution for the single size `lam` and its regret.
#[pyfunction]
#[pyo3(signature = (instance, lam, backend = "highs", epsilon = DEFAULT_EPSILON, formulation = None, solver_cmd = None))]
fn minmax_regret(
    instance: &PyInstance,
    lam: f64,
    backend: &str,
    epsilon: f64,
    formulation: Option<&str>,
    solver_cmd: Option<String>,
) -> PyResult<(String, f64)> {
    let inst = instance.inner();
    let b = self::backend(backend, solver_cmd)?;
    let (x, r) = solve_minmax_regret_fixed(inst, lam, b.as_ref(), self::formulation(formulation, inst)?, epsilon)
        .map_err(py_err)?;
    Ok((x.to_string(), r))
}

/// Compromise solution for interval min-max: a nominal minimizer, with its value.
#[pyfunction]
#[pyo3(signature = (instance, weight = None))]
fn interval_minmax(instance: &PyInstance, weight: Option<Vec<(f64, f64)>>) -> PyResult<(String, f64)> {
    let (x, v) = compromise_interval_minmax(instance.inner(), &self::weight(weight)?).map_err(py_err)?;
    Ok((x.to_string(), v))
}

/// CPLEX-LP text of the master problem for the changepoint set `lambdas`.
#[pyfunction]
#[pyo3(signature = (instance, lambdas, witnesses = Vec::new(), weight = None, formulation = None))]
fn master_lp(
    instance: &PyInstance,
    lambdas: Vec<f64>,
    witnesses: Vec<SolutionArg>,
    weight: Option<Vec<(f64, f64)>>,
    formulation: Option<&str>,
) -> PyResult<String> {
    let inst = instance.inner();
    let w = self::weight(weight)?;
    let model = match self::formulation(formulation, inst)? {
        Formulation::DualSp => {
            let g = inst
                .as_graph()
                .ok_or_else(|| PyValueError::new_err("the dual formulation needs a shortest path instance"))?;
            build_formulation_dual_sp(g, &lambdas, &w).map_err(py_err)?
        }
        Formulation::General => {
            let ys = witnesses.into_iter().map(SolutionArg::into_solution).collect::<PyResult<Vec<_>>>()?;
            build_formulation_general(inst, &lambdas, &ys, &w).map_err(py_err)?
        }
    };
    Ok(write_lp(&model))
}

#[pymodule]
fn vsr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(regret, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(compromise, m)?)?;
    m.add_function(wrap_pyfunction!(minmax_regret, m)?)?;
    m.add_function(wrap_pyfunction!(interval_minmax, m)?)?;
    m.add_function(wrap_pyfunction!(master_lp, m)?)?;
    Ok(())
}
