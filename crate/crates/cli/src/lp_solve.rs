//! Solving a CPLEX-LP file with the bundled HiGHS library.

use std::ffi::{CStr, CString};
use std::os::raw::c_void;
use std::path::Path;

use highs_sys::{
    kHighsModelStatusInfeasible, kHighsModelStatusOptimal, kHighsStatusError, Highs_create,
    Highs_destroy, Highs_getModelStatus, Highs_readModel, Highs_run, Highs_setBoolOptionValue,
    Highs_setIntOptionValue, Highs_version, Highs_writeSolution,
};

struct Solver(*mut c_void);

impl Drop for Solver {
    fn drop(&mut self) {
        // SAFETY: the pointer came from Highs_create and is destroyed once.
        unsafe { Highs_destroy(self.0) }
    }
}

fn c_path(path: &Path) -> Result<CString, String> {
    CString::new(path.to_string_lossy().as_bytes()).map_err(|_| format!("path {} contains a NUL byte", path.display()))
}

pub fn highs_version() -> String {
    // SAFETY: returns a pointer to a static NUL-terminated string.
    unsafe { CStr::from_ptr(Highs_version()) }.to_string_lossy().into_owned()
}

/// Reads `model`, solves it and writes the HiGHS raw solution to `solution`.
/// Returns the model status name.
pub fn solve_lp_file(model: &Path, solution: &Path, threads: Option<usize>) -> Result<&'static str, String> {
    let model_c = c_path(model)?;
    let solution_c = c_path(solution)?;
    // SAFETY: every call receives the live handle and NUL-terminated strings
    // that outlive the call.
    unsafe {
        let solver = Solver(Highs_create());
        if solver.0.is_null() {
            return Err("HiGHS could not be created".into());
        }
        Highs_setBoolOptionValue(solver.0, c"output_flag".as_ptr(), 0);
        if let Some(t) = threads {
            Highs_setIntOptionValue(solver.0, c"threads".as_ptr(), t as _);
        }
        if Highs_readModel(solver.0, model_c.as_ptr()) == kHighsStatusError {
            return Err(format!("HiGHS could not read {}", model.display()));
        }
        if Highs_run(solver.0) == kHighsStatusError {
            return Err(format!("HiGHS failed on {}", model.display()));
        }
        if Highs_writeSolution(solver.0, solution_c.as_ptr()) == kHighsStatusError {
            return Err(format!("HiGHS could not write {}", solution.display()));
        }
        Ok(match Highs_getModelStatus(solver.0) {
            s if s == kHighsModelStatusOptimal => "Optimal",
            s if s == kHighsModelStatusInfeasible => "Infeasible",
            _ => "Other",
        })
    }
}
