//! Exact compromise solver: master formulations, MILP backends and the row
//! generation loop, plus the fixed-size min-max regret baseline.

mod algorithm;
mod backend;
mod formulation;
#[cfg(feature = "highs")]
mod highs_backend;
mod lp;
mod model;

pub use algorithm::{
    algorithm1, solve_minmax_regret_fixed, Algorithm1Options, Algorithm1Result, AlgorithmFailure,
    Formulation, IterationRecord, MasterState, DEFAULT_EPSILON,
};
pub use backend::{
    parse_solution, BackendSolution, EnumerationBackend, ExternalBackend, SolveStatus, SolverBackend,
    FEASIBILITY_TOLERANCE, MAX_PATTERN_BINARIES, SOLVER_CMD_ENV,
};
pub use formulation::{build_formulation_dual_sp, build_formulation_general, build_segments, Segment};
#[cfg(feature = "highs")]
pub use highs_backend::HighsBackend;
pub use lp::write_lp;
pub use model::{
    Constraint, ConstraintSense, FeasibilityVars, MilpModel, ModelMeta, ModelStructure, VarKind, Variable,
};
