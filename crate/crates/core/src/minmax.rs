//! Compromise solutions for min-max robustness, where the integral over all
//! uncertainty sizes collapses to a single deterministic problem.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{BinarySolution, NominalCosts, WeightFunction};
use crate::problems::{CombinatorialProblem, Instance, DEFAULT_ENUMERATION_LIMIT};

/// Moments of `w` and the single size `λ′ = m1/m0` they reduce to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidReduction {
    pub lambda_prime: f64,
    /// `∫ w`
    pub m0: f64,
    /// `∫ λ·w`
    pub m1: f64,
}

impl EllipsoidReduction {
    pub fn from_weight(w: &WeightFunction) -> Result<Self> {
        let r = w.range();
        let (m0, m1) = w.moments(r.lo(), r.hi())?;
        if m0 <= 0.0 {
            return Err(Error::Domain("weight function has zero mass".into()));
        }
        Ok(EllipsoidReduction {
            lambda_prime: m1 / m0,
            m0,
            m1,
        })
    }
}

/// Interval uncertainty: a nominal minimizer is optimal for every size, so it is
/// the compromise solution, with value `(m0 + m1)·ĉᵗx̂`.
pub fn compromise_interval_minmax(
    instance: &Instance,
    w: &WeightFunction,
) -> Result<(BinarySolution, f64)> {
    let range = w.range();
    range.require_interval_shape()?;
    let (m0, m1) = w.moments(range.lo(), range.hi())?;
    let nominal = instance.nominal().values();
    let (x, value) = instance.solve_nominal(nominal)?;
    Ok((x, (m0 + m1) * value))
}

/// `‖Cᵗx‖₂`: the sum of the rows of `C` selected by `x`.
fn deviation_norm(x: &BinarySolution, c: &DMatrix<f64>) -> f64 {
    let mut v = vec![0.0; c.ncols()];
    for i in x.ones() {
        for (j, vj) in v.iter_mut().enumerate() {
            *vj += c[(i, j)];
        }
    }
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Worst-case cost `ĉᵗx + λ‖Cᵗx‖₂` of `x` over the ellipsoid of size `λ`.
pub fn ellipsoid_worst_case(
    x: &BinarySolution,
    nominal: &NominalCosts,
    c: &DMatrix<f64>,
    lambda: f64,
) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("uncertainty size must be ≥ 0, got {lambda}")));
    }
    if x.len() != nominal.len() || c.nrows() != nominal.len() {
        return Err(Error::Usage(format!(
            "dimension mismatch: x has {}, ĉ has {}, C has {} rows",
            x.len(),
            nominal.len(),
            c.nrows()
        )));
    }
    Ok(x.dot(nominal.values()) + lambda * deviation_norm(x, c))
}

/// Ellipsoidal uncertainty: minimizes `m0·ĉᵗx + m1·‖Cᵗx‖₂`, the robust problem at
/// size `λ′`, by enumerating the feasible set. Ties go to the lexicographically
/// smallest incidence vector.
pub fn compromise_ellipsoid_minmax(
    instance: &Instance,
    c: &DMatrix<f64>,
    w: &WeightFunction,
) -> Result<(BinarySolution, f64, EllipsoidReduction)> {
    let n = instance.dimension();
    if c.nrows() != n {
        return Err(Error::Usage(format!("C has {} rows, instance has {n} elements", c.nrows())));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("ellipsoid matrix must be finite".into()));
    }
    let reduction = EllipsoidReduction::from_weight(w)?;
    let nominal = instance.nominal().values();
    let mut best: Option<(f64, BinarySolution)> = None;
    for x in instance.enumerate_solutions(DEFAULT_ENUMERATION_LIMIT)? {
        let value = reduction.m0 * x.dot(nominal) + reduction.m1 * deviation_norm(&x, c);
        let better = match &best {
            None => true,
            Some((bv, bx)) => value < *bv || (value == *bv && x < *bx),
        };
        if better {
            best = Some((value, x));
        }
    }
    let (value, x) = best.ok_or_else(|| Error::Infeasible("no feasible solution".into()))?;
    Ok((x, value, reduction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LambdaInterval;
    use crate::problems::SelectionInstance;
    use crate::rng::SplitMix64;

    fn selection(p: usize, c: &[f64]) -> Instance {
        SelectionInstance::new(p, NominalCosts::new(c.to_vec()).unwrap())
            .unwrap()
            .into()
    }

    fn ramp() -> WeightFunction {
        WeightFunction::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap()
    }

    #[test]
    fn interval_examples() {
        let (x, v) = compromise_interval_minmax(&selection(1, &[2.0, 5.0, 9.0]), &WeightFunction::uniform())
            .unwrap();
        assert_eq!(x.ones(), vec![0]);
        assert_eq!(v, 3.0);
        let (_, v) = compromise_interval_minmax(&selection(2, &[0.0; 4]), &WeightFunction::uniform()).unwrap();
        assert_eq!(v, 0.0);
        let g = crate::regret::tests::parallel_edges();
        let (x, v) = compromise_interval_minmax(&g, &ramp()).unwrap();
        assert_eq!(x.ones(), vec![0]);
        assert!((v - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn interval_rejects_sizes_beyond_one() {
        let w = WeightFunction::constant(LambdaInterval::new(0.0, 2.0).unwrap(), 1.0).unwrap();
        assert!(compromise_interval_minmax(&selection(1, &[1.0, 2.0]), &w).is_err());
    }

    #[test]
    fn reduction_moments() {
        let r = EllipsoidReduction::from_weight(&WeightFunction::uniform()).unwrap();
        assert_eq!(r.lambda_prime, 0.5);
        let r = EllipsoidReduction::from_weight(&ramp()).unwrap();
        assert!((r.lambda_prime - 2.0 / 3.0).abs() < 1e-15);
        let r2 = EllipsoidReduction::from_weight(&ramp().scaled(7.5).unwrap()).unwrap();
        assert_eq!(r.lambda_prime, r2.lambda_prime);
        let point = WeightFunction::new(vec![(0.3, 1.0)]).unwrap();
        assert!(matches!(EllipsoidReduction::from_weight(&point), Err(Error::Domain(_))));
    }

    #[test]
    fn worst_case_examples() {
        let nominal = NominalCosts::new(vec![3.0, 1.0, 2.0]).unwrap();
        let x = BinarySolution::from_indices(3, [0]);
        let id = DMatrix::<f64>::identity(3, 3);
        assert_eq!(ellipsoid_worst_case(&x, &nominal, &id, 0.0).unwrap(), 3.0);
        assert_eq!(ellipsoid_worst_case(&x, &nominal, &id, 2.0).unwrap(), 5.0);
        assert!(ellipsoid_worst_case(&x, &nominal, &id, -1.0).is_err());
    }

    #[test]
    fn worst_case_dominates_sampled_scenarios() {
        let mut rng = SplitMix64::new(11);
        let c = DMatrix::from_fn(5, 3, |_, _| rng.next_f64() * 4.0 - 2.0);
        let nominal = NominalCosts::new((0..5).map(|_| rng.next_f64() * 10.0).collect()).unwrap();
        let x = BinarySolution::new(vec![true, false, true, true, false]);
        let lambda = 0.7;
        let analytic = ellipsoid_worst_case(&x, &nominal, &c, lambda).unwrap();
        let base = x.dot(nominal.values());
        let g: Vec<f64> = (0..3).map(|j| x.ones().iter().map(|&i| c[(i, j)]).sum()).collect();
        let mut best = f64::NEG_INFINITY;
        for _ in 0..100_000 {
            // Direction uniform on the sphere via normalized Gaussians.
            let xi: Vec<f64> = (0..3)
                .map(|_| {
                    let (u, v) = (rng.next_f64().max(1e-300), rng.next_f64());
                    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
                })
                .collect();
            let norm = xi.iter().map(|a| a * a).sum::<f64>().sqrt();
            let cost = base + xi.iter().zip(&g).map(|(a, b)| lambda * a / norm * b).sum::<f64>();
            assert!(cost <= analytic + 1e-9);
            best = best.max(cost);
        }
        assert!((analytic - best) / analytic < 1e-3);
        let gnorm = g.iter().map(|a| a * a).sum::<f64>().sqrt();
        let attained = base + g.iter().map(|b| lambda * b / gnorm * b).sum::<f64>();
        assert!((attained - analytic).abs() < 1e-12);
    }

    #[test]
    fn ellipsoid_selection_example() {
        let inst = selection(1, &[2.0, 2.2, 9.0]);
        let c = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 0.1, 0.1]));
        let (x, v, red) = compromise_ellipsoid_minmax(&inst, &c, &WeightFunction::uniform()).unwrap();
        assert_eq!(x.ones(), vec![1]);
        assert!((v - 2.25).abs() < 1e-12);
        assert_eq!(red.lambda_prime, 0.5);
    }

    #[test]
    fn ellipsoid_ties_pick_smallest_incidence() {
        let inst = selection(1, &[1.0, 1.0]);
        let c = DMatrix::<f64>::identity(2, 2);
        let (x, _, _) = compromise_ellipsoid_minmax(&inst, &c, &WeightFunction::uniform()).unwrap();
        // (0,1) < (1,0) lexicographically.
        assert_eq!(x.ones(), vec![1]);
    }
}
