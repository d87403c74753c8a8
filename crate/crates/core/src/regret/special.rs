use crate::error::{Error, Result};
use crate::model::{BinarySolution, NominalCosts, WeightFunction, EPS_LAMBDA};
use crate::problems::{CombinatorialProblem, Instance, SelectionInstance};
use crate::regret::{compute_val, EvaluationResult};

/// Sizes `λ ∈ (0,1)` where `(1−λ)ĉᵢ = (1+λ)ĉⱼ` for some pair with `ĉᵢ > ĉⱼ`.
///
/// Only at these sizes can the cost order under `c(x,λ)` change, so every
/// changepoint of a selection profile is among them.
pub fn selection_changepoint_candidates(nominal: &NominalCosts) -> Vec<f64> {
    crossing_sizes(nominal.values())
}

/// Sizes where an increased edge cost meets a decreased one, i.e. where
/// Kruskal's order under `c(x,λ)` may change for some tree `x`.
pub fn mst_changepoint_candidates(nominal: &NominalCosts) -> Vec<f64> {
    crossing_sizes(nominal.values())
}

fn crossing_sizes(c: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for &hi in c {
        for &lo in c {
            if hi > lo {
                let lambda = (hi - lo) / (hi + lo);
                if lambda > 0.0 && lambda < 1.0 {
                    out.push(lambda);
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| *b - *a <= EPS_LAMBDA);
    out
}

/// Optimal compromise solution of a selection instance.
///
/// The nominal solution minimizes the regret for every fixed size in `[0,1]`,
/// hence also its weighted integral; only its evaluation remains.
pub fn compromise_selection(
    instance: &SelectionInstance,
    w: &WeightFunction,
) -> Result<(BinarySolution, EvaluationResult)> {
    if w.range().hi() > 1.0 {
        return Err(Error::Domain("selection compromise needs Λ ⊆ [0, 1]".into()));
    }
    let (x, _) = instance.solve_nominal(instance.nominal().values())?;
    let eval = compute_val(&Instance::Selection(instance.clone()), &x, w)?;
    Ok((x, eval))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn costs(c: &[f64]) -> NominalCosts {
        NominalCosts::new(c.to_vec()).unwrap()
    }

    #[test]
    fn candidate_examples() {
        assert_eq!(selection_changepoint_candidates(&costs(&[3.0, 1.0])), vec![0.5]);
        assert!(selection_changepoint_candidates(&costs(&[5.0, 5.0, 5.0])).is_empty());
        // Pairs give 1/3, 3/5 and 1/3 again.
        let got = selection_changepoint_candidates(&costs(&[1.0, 2.0, 4.0]));
        let want = [1.0 / 3.0, 0.6];
        assert_eq!(got.len(), 2);
        assert!(got.iter().zip(want).all(|(g, w)| (g - w).abs() < 1e-15));
        assert_eq!(mst_changepoint_candidates(&costs(&[1.0, 3.0])), vec![0.5]);
        assert!(mst_changepoint_candidates(&costs(&[1.0; 5])).is_empty());
        let got = mst_changepoint_candidates(&costs(&[2.0, 4.0, 8.0]));
        assert_eq!(got.len(), 2);
        assert!((got[0] - 1.0 / 3.0).abs() < 1e-15 && (got[1] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn zero_costs_are_skipped() {
        assert!(selection_changepoint_candidates(&costs(&[0.0, 0.0])).is_empty());
        // A zero cost against a positive one crosses only at λ = 1.
        assert!(selection_changepoint_candidates(&costs(&[0.0, 2.0])).is_empty());
    }

    #[test]
    fn compromise_is_nominal_solution() {
        let s = SelectionInstance::new(1, costs(&[2.0, 5.0, 9.0])).unwrap();
        let (x, eval) = compromise_selection(&s, &WeightFunction::uniform()).unwrap();
        assert_eq!(x.ones(), vec![0]);
        // Regret of item 0 against item 1: max(0, 7λ − 3), integral 8/7 on [3/7, 1].
        assert!((eval.val - 8.0 / 7.0).abs() < 1e-12, "{}", eval.val);
    }
}
