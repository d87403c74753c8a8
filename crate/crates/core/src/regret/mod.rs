//! Regret evaluation: pointwise regret, exact changepoint discovery for a fixed
//! solution, and closed-form integration of the resulting profile.

mod bicriteria;
mod special;

pub use bicriteria::{bicriteria_extreme_count, bicriteria_extreme_points};
pub use special::{
    compromise_selection, mst_changepoint_candidates, selection_changepoint_candidates,
};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{
    effective_cost_unchecked, upper_envelope, AffinePiece, BinarySolution, RegretProfile,
    WeightFunction, EPS_LAMBDA,
};
use crate::problems::{CombinatorialProblem, Instance};

/// Default cap on the number of candidate changepoints per evaluation.
pub const DEFAULT_CHANGEPOINT_CAP: usize = 1_000_000;

/// Worst-case regret of `x` at size `lambda` and the solution realizing it.
pub fn regret_at(
    instance: &Instance,
    x: &BinarySolution,
    lambda: f64,
) -> Result<(f64, BinarySolution)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("uncertainty size λ={lambda} outside [0, 1]")));
    }
    instance.require_feasible(x)?;
    let costs = effective_cost_unchecked(x, lambda, instance.nominal().values());
    let (y, opt) = instance.solve_nominal(&costs)?;
    let value = (x.dot(&costs) - opt).max(0.0);
    Ok((value, y))
}

#[derive(Debug, Clone, Copy)]
pub struct EvaluationOptions {
    pub changepoint_cap: usize,
}

impl Default for EvaluationOptions {
    fn default() -> Self {
        EvaluationOptions {
            changepoint_cap: DEFAULT_CHANGEPOINT_CAP,
        }
    }
}

/// Outcome of evaluating `val(x)`.
#[derive(Debug, Clone)]
pub struct EvaluationResult {
    /// `∫ w(λ)·reg(x,λ) dλ`.
    pub val: f64,
    pub profile: RegretProfile,
    /// Interior breakpoints of `profile`, ascending.
    pub changepoints: Vec<f64>,
    /// One regret solution per profile segment, in λ order.
    pub witnesses: Vec<BinarySolution>,
    /// Number of nominal oracle calls made.
    pub oracle_calls: usize,
}

impl EvaluationResult {
    /// Left endpoints of the profile segments: `Λ.lo` followed by the changepoints.
    /// Its size equals the number of regret solutions defining the profile.
    pub fn segment_starts(&self) -> Vec<f64> {
        self.profile.segments().iter().map(|s| s.lo).collect()
    }
}

pub fn compute_val(
    instance: &Instance,
    x: &BinarySolution,
    w: &WeightFunction,
) -> Result<EvaluationResult> {
    compute_val_with(instance, x, w, EvaluationOptions::default())
}

/// Computes `val(x)` exactly by discovering every piece of `reg(x,·)`.
///
/// Starts from the range endpoints, solves the nominal problem under `c(x,λ)` at
/// every new candidate, and adds the intersection of every pair of collected
/// regret lines as a new candidate until no new point appears. The pieces are
/// then reduced to their upper envelope and integrated against `w`.
pub fn compute_val_with(
    instance: &Instance,
    x: &BinarySolution,
    w: &WeightFunction,
    options: EvaluationOptions,
) -> Result<EvaluationResult> {
    let range = w.range();
    range.require_interval_shape()?;
    instance.require_feasible(x)?;
    let nominal = instance.nominal().values();

    let mut candidates = vec![range.lo()];
    if !range.is_degenerate() {
        candidates.push(range.hi());
    }
    let mut fresh = candidates.clone();
    let mut pieces: Vec<AffinePiece> = Vec::new();
    let mut seen: HashSet<BinarySolution> = HashSet::new();
    let mut paired = 0;
    let mut oracle_calls = 0;

    loop {
        for lambda in fresh.drain(..) {
            let costs = effective_cost_unchecked(x, lambda, nominal);
            let (y, _) = instance.solve_nominal(&costs)?;
            oracle_calls += 1;
            if seen.insert(y.clone()) {
                pieces.push(AffinePiece::regret_line(x, y, nominal));
            }
        }
        let mut changed = false;
        for j in paired..pieces.len() {
            for i in 0..j {
                let Some(lambda) = pieces[i].intersection(&pieces[j]) else {
                    continue;
                };
                if lambda < range.lo() || lambda > range.hi() {
                    continue;
                }
                let pos = candidates.partition_point(|&c| c < lambda);
                let near_left = pos > 0 && lambda - candidates[pos - 1] <= EPS_LAMBDA;
                let near_right = pos < candidates.len() && candidates[pos] - lambda <= EPS_LAMBDA;
                if near_left || near_right {
                    continue;
                }
                candidates.insert(pos, lambda);
                fresh.push(lambda);
                changed = true;
            }
        }
        paired = pieces.len();
        if candidates.len() > options.changepoint_cap {
            return Err(Error::Capacity {
                what: "candidate changepoints while evaluating val(x)".into(),
                limit: options.changepoint_cap,
            });
        }
        if !changed {
            break;
        }
    }

    let profile = upper_envelope(&pieces, range)?.with_owner(x.clone());
    let val = integrate_profile(&profile, w);
    Ok(EvaluationResult {
        val,
        changepoints: profile.interior_breakpoints(),
        witnesses: profile.witnesses().cloned().collect(),
        profile,
        oracle_calls,
    })
}

/// `∫ w(λ)·profile(λ) dλ` over the overlap of the profile and weight ranges.
///
/// Each affine piece `sλ + b` contributes `s·∫λw + b·∫w` over its segment, which
/// for `w ≡ 1` is the segment width times the piece's midpoint value.
pub fn integrate_profile(profile: &RegretProfile, w: &WeightFunction) -> f64 {
    let wr = w.range();
    profile
        .segments()
        .iter()
        .map(|s| {
            let (lo, hi) = (s.lo.max(wr.lo()), s.hi.min(wr.hi()));
            if hi <= lo {
                return 0.0;
            }
            let (m0, m1) = w.moments(lo, hi).expect("bounds clipped to the weight range");
            s.piece.slope * m1 + s.piece.intercept * m0
        })
        .sum()
}
